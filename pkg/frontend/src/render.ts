import type { ClassLabel, RowDto, UnitDto } from './types.js';
import { CLASS_LABELS } from './types.js';

export interface RowHandlers {
  onConfirm?: (row: RowDto) => void;
  onCorrect?: (row: RowDto, label: ClassLabel) => void;
  onEditText?: (row: RowDto, text: string) => void;
}

type Child = Node | string;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  // Text lands via textContent semantics, so row content cannot inject markup.
  node.append(...children);
  return node;
}

export function renderSourcePane(units: UnitDto[]): HTMLElement {
  const pane = el('div', { class: 'source-pane' });
  let page = -1;
  for (const unit of units) {
    if (unit.page !== page) {
      page = unit.page;
      pane.append(el('div', { class: 'page-break' }, `Page ${page + 1}`));
    }
    pane.append(el('pre', { class: 'source-line' }, unit.text));
  }
  return pane;
}

function headerRow(labels: string[]): HTMLTableRowElement {
  return el('tr', {}, ...labels.map((label) => el('th', {}, label)));
}

export function renderExtractionTable(
  rows: RowDto[],
  handlers: RowHandlers = {},
): HTMLTableElement {
  const table = el('table', { class: 'rows extraction' });
  table.append(
    headerRow([
      'Object Identifier',
      'Object Number',
      'Object Heading',
      'Object Text',
      'Object Level',
      'Actions',
    ]),
  );
  for (const row of rows) {
    const actions = el('td', { class: 'actions' });
    if (row.kind === 'TEXT' && handlers.onEditText) {
      const button = el('button', { type: 'button' }, 'Edit text');
      button.addEventListener('click', () => {
        const text = window.prompt('Corrected text', row.object_text);
        if (text !== null && text !== row.object_text) {
          handlers.onEditText?.(row, text);
        }
      });
      actions.append(button);
    }
    table.append(
      el(
        'tr',
        { 'data-row-id': row.object_identifier },
        el('td', {}, row.object_identifier),
        el('td', {}, row.object_number),
        el('td', {}, row.object_heading),
        el('td', { class: 'object-text' }, row.object_text),
        el('td', {}, String(row.object_level)),
        actions,
      ),
    );
  }
  return table;
}

function correctPicker(row: RowDto, handlers: RowHandlers): HTMLElement {
  const select = el('select', { class: 'correct-picker' });
  select.append(el('option', { value: '' }, 'Correct to...'));
  for (const label of CLASS_LABELS) {
    select.append(el('option', { value: label }, label));
  }
  select.addEventListener('change', () => {
    if (select.value) {
      handlers.onCorrect?.(row, select.value as ClassLabel);
      select.value = '';
    }
  });
  return select;
}

export function renderClassificationTable(
  rows: RowDto[],
  handlers: RowHandlers = {},
): HTMLTableElement {
  const table = el('table', { class: 'rows classification' });
  table.append(
    headerRow([
      'Object Number',
      'Content',
      'Object Type',
      'Confidence',
      'Review',
      'Actions',
    ]),
  );
  for (const row of rows) {
    const confirm = el('button', { type: 'button' }, 'Confirm');
    confirm.addEventListener('click', () => handlers.onConfirm?.(row));
    const typeCell = el(
      'td',
      { class: `object-type state-${row.review_state.toLowerCase()}` },
      row.corrected_type ?? row.object_type ?? '',
    );
    table.append(
      el(
        'tr',
        { 'data-row-id': row.object_identifier },
        el('td', {}, row.object_number),
        el('td', { class: 'object-text' }, row.object_heading || row.object_text),
        typeCell,
        el('td', {}, row.confidence === null ? '' : row.confidence.toFixed(3)),
        el('td', { class: 'review-state' }, row.review_state),
        el('td', { class: 'actions' }, confirm, ' ', correctPicker(row, handlers)),
      ),
    );
  }
  return table;
}

export function renderProgress(fraction: number): HTMLElement {
  const percent = Math.round(fraction * 100);
  const bar = el('div', { class: 'progress' });
  bar.append(
    el('div', {
      class: 'progress-fill',
      style: `width: ${percent}%`,
    }),
    el('span', { class: 'progress-text' }, `${percent}% reviewed`),
  );
  return bar;
}

export function renderPager(
  page: number,
  pages: number,
  onPage: (page: number) => void,
): HTMLElement {
  const pager = el('div', { class: 'pager' });
  const previous = el('button', { type: 'button' }, 'Previous');
  const next = el('button', { type: 'button' }, 'Next');
  if (page <= 0) previous.setAttribute('disabled', '');
  if (page >= pages - 1) next.setAttribute('disabled', '');
  previous.addEventListener('click', () => onPage(page - 1));
  next.addEventListener('click', () => onPage(page + 1));
  pager.append(previous, el('span', {}, ` page ${page + 1} of ${pages} `), next);
  return pager;
}

export function renderError(message: string): HTMLElement {
  return el('div', { class: 'error-banner', role: 'alert' }, message);
}
