import { ApiClient } from './api.js';
import {
  applyServerRows,
  DocState,
  emptyState,
  gotoPage,
  optimisticPatch,
  pageCount,
  replaceRow,
  reviewedFraction,
  visibleRows,
} from './state.js';
import {
  renderClassificationTable,
  renderError,
  renderExtractionTable,
  renderPager,
  renderProgress,
  renderSourcePane,
} from './render.js';
import type {
  BindingSpec,
  ClassLabel,
  DocumentSummary,
  PatchAction,
  RowDto,
  UnitDto,
} from './types.js';

type View = 'extraction' | 'classification';

const EXPORT_FORMATS = ['csv', 'json', 'yaml'] as const;

/**
 * Single-page review workflow. Rendering is a pure function of the held
 * state, and the held state only ever comes from server responses (plus
 * short-lived optimistic patches that a response or revert replaces), so
 * refetching and re-rendering reproduces the same document.
 */
export class ReviewApp {
  private documents: DocumentSummary[] = [];
  private doc: DocState | null = null;
  private units: UnitDto[] = [];
  private view: View = 'extraction';
  private error = '';
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly root: HTMLElement,
    readonly api: ApiClient,
    private readonly pollMs = 0,
  ) {}

  async start(): Promise<void> {
    this.documents = await this.api.listDocuments();
    this.render();
  }

  async openDocument(docId: string): Promise<void> {
    this.doc = emptyState(docId);
    this.units = [];
    this.view = 'extraction';
    this.error = '';
    await this.refresh();
    if (this.pollMs > 0) {
      this.stopPolling();
      this.pollTimer = setInterval(() => {
        void this.refresh().catch(() => undefined);
      }, this.pollMs);
    }
  }

  stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  /** Refetches everything shown; the server stays the source of truth. */
  async refresh(): Promise<void> {
    if (!this.doc) return;
    const docId = this.doc.docId;
    this.units = await this.api.units(docId);
    try {
      const { rows, total } = await this.api.allRows(docId);
      this.doc = applyServerRows(this.doc, rows, total);
    } catch {
      // Not extracted yet: an empty table is the true state.
      this.doc = applyServerRows(this.doc, [], 0);
    }
    this.render();
  }

  async upload(filename: string, content: Blob): Promise<string> {
    const docId = await this.api.upload(filename, content);
    this.documents = await this.api.listDocuments();
    await this.openDocument(docId);
    return docId;
  }

  async extract(hfModel?: string): Promise<void> {
    if (!this.doc) return;
    await this.withErrorBanner(async () => {
      await this.api.extract(this.doc!.docId, hfModel);
      await this.refresh();
    });
  }

  async classify(binding: BindingSpec): Promise<void> {
    if (!this.doc) return;
    await this.withErrorBanner(async () => {
      await this.api.classify(this.doc!.docId, binding);
      this.view = 'classification';
      await this.refresh();
    });
  }

  setView(view: View): void {
    this.view = view;
    this.render();
  }

  setPage(page: number): void {
    if (!this.doc) return;
    this.doc = gotoPage(this.doc, page);
    this.render();
  }

  /** Optimistic PATCH: predicted row now, server row or revert after. */
  async patchRow(row: RowDto, action: PatchAction): Promise<void> {
    if (!this.doc) return;
    const rowId = row.object_identifier;
    const patch = optimisticPatch(this.doc, rowId, action);
    this.doc = patch.state;
    this.error = '';
    this.render();
    try {
      const serverRow = await this.api.patchRow(this.doc.docId, rowId, action);
      this.doc = replaceRow(this.doc, rowId, serverRow);
    } catch (error) {
      this.doc = patch.revert(this.doc);
      this.error = error instanceof Error ? error.message : String(error);
    }
    this.render();
  }

  private async withErrorBanner(work: () => Promise<void>): Promise<void> {
    this.error = '';
    try {
      await work();
    } catch (error) {
      this.error = error instanceof Error ? error.message : String(error);
      this.render();
    }
  }

  render(): void {
    this.root.replaceChildren();
    if (this.error) {
      this.root.append(renderError(this.error));
    }
    if (!this.doc) {
      this.root.append(this.renderDocumentList());
      return;
    }
    this.root.append(this.renderToolbar(), this.renderControls());
    if (this.view === 'classification') {
      this.root.append(renderProgress(reviewedFraction(this.doc.rows)));
    }
    const rows = visibleRows(this.doc);
    if (this.view === 'extraction') {
      const split = document.createElement('div');
      split.className = 'split';
      split.append(
        renderSourcePane(this.units),
        renderExtractionTable(rows, {
          onEditText: (row, text) =>
            void this.patchRow(row, { action: 'EDIT_TEXT', text }),
        }),
      );
      this.root.append(split);
    } else {
      this.root.append(
        renderClassificationTable(rows, {
          onConfirm: (row) => void this.patchRow(row, { action: 'CONFIRM' }),
          onCorrect: (row, label) =>
            void this.patchRow(row, { action: 'CORRECT', label }),
        }),
      );
    }
    this.root.append(
      renderPager(this.doc.page, pageCount(this.doc), (page) =>
        this.setPage(page),
      ),
    );
  }

  private renderDocumentList(): HTMLElement {
    const list = document.createElement('div');
    list.className = 'document-list';
    const heading = document.createElement('h2');
    heading.textContent = 'Documents';
    list.append(heading);

    const input = document.createElement('input');
    input.type = 'file';
    input.accept = '.md,.txt';
    const uploadButton = document.createElement('button');
    uploadButton.type = 'button';
    uploadButton.className = 'upload';
    uploadButton.textContent = 'Upload';
    uploadButton.addEventListener('click', () => {
      const file = input.files?.[0];
      if (file) {
        void this.withErrorBanner(async () => {
          await this.upload(file.name, file);
        });
      }
    });
    const form = document.createElement('div');
    form.className = 'upload-form';
    form.append(input, uploadButton);
    list.append(form);

    for (const doc of this.documents) {
      const entry = document.createElement('button');
      entry.type = 'button';
      entry.className = 'document-entry';
      entry.textContent = `${doc.filename} (${doc.doc_id})`;
      entry.addEventListener('click', () => void this.openDocument(doc.doc_id));
      list.append(entry);
    }
    return list;
  }

  private renderControls(): HTMLElement {
    const controls = document.createElement('div');
    controls.className = 'controls';

    const modelInput = document.createElement('input');
    modelInput.type = 'text';
    modelInput.placeholder = 'header/footer model path (optional)';
    const extractButton = document.createElement('button');
    extractButton.type = 'button';
    extractButton.className = 'extract';
    extractButton.textContent = 'Extract';
    extractButton.addEventListener('click', () => {
      void this.extract(modelInput.value || undefined);
    });

    const bindingKind = document.createElement('select');
    for (const kind of ['builtin', 'external']) {
      const option = document.createElement('option');
      option.value = kind;
      option.textContent = kind;
      bindingKind.append(option);
    }
    const bindingTarget = document.createElement('input');
    bindingTarget.type = 'text';
    bindingTarget.placeholder = 'model path or endpoint URL';
    const classifyButton = document.createElement('button');
    classifyButton.type = 'button';
    classifyButton.className = 'classify';
    classifyButton.textContent = 'Classify';
    classifyButton.addEventListener('click', () => {
      const binding: BindingSpec =
        bindingKind.value === 'external'
          ? { kind: 'external', endpoint: bindingTarget.value }
          : { kind: 'builtin', model_path: bindingTarget.value };
      void this.classify(binding);
    });

    controls.append(
      modelInput,
      extractButton,
      bindingKind,
      bindingTarget,
      classifyButton,
    );
    return controls;
  }

  private renderToolbar(): HTMLElement {
    const bar = document.createElement('div');
    bar.className = 'toolbar';
    for (const view of ['extraction', 'classification'] as const) {
      const tab = document.createElement('button');
      tab.type = 'button';
      tab.className = this.view === view ? 'tab active' : 'tab';
      tab.textContent = view === 'extraction' ? 'Extraction' : 'Classification';
      tab.addEventListener('click', () => this.setView(view));
      bar.append(tab);
    }
    for (const format of EXPORT_FORMATS) {
      const link = document.createElement('a');
      link.className = 'download';
      link.textContent = `Download ${format}`;
      link.href = this.api.exportUrl(this.doc!.docId, format);
      bar.append(link);
    }
    return bar;
  }
}

/** Browser entry point; tests construct ReviewApp directly instead. */
export function mountApp(root: HTMLElement, baseUrl = ''): ReviewApp {
  const app = new ReviewApp(root, new ApiClient(baseUrl), 5000);
  void app.start();
  return app;
}
