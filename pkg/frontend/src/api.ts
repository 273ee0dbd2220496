import type {
  BindingSpec,
  DocumentSummary,
  ExtractResult,
  PatchAction,
  RowDto,
  RowsPage,
  UnitDto,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { message?: string };
    if (body && typeof body.message === 'string') return body.message;
  } catch {
    // fall through to the generic message
  }
  return `request failed with HTTP ${response.status}`;
}

/** Thin typed wrapper over the review service's REST endpoints. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorMessage(response));
    }
    return (await response.json()) as T;
  }

  async listDocuments(): Promise<DocumentSummary[]> {
    const data = await this.request<{ documents: DocumentSummary[] }>('/documents');
    return data.documents;
  }

  async upload(filename: string, content: Blob): Promise<string> {
    const form = new FormData();
    form.append('file', content, filename);
    const data = await this.request<{ doc_id: string }>('/documents', {
      method: 'POST',
      body: form,
    });
    return data.doc_id;
  }

  async units(docId: string): Promise<UnitDto[]> {
    const data = await this.request<{ units: UnitDto[] }>(
      `/documents/${docId}/units`,
    );
    return data.units;
  }

  async extract(docId: string, hfModel?: string): Promise<ExtractResult> {
    return this.request<ExtractResult>(`/documents/${docId}/extract`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(hfModel ? { hf_model: hfModel } : {}),
    });
  }

  async classify(docId: string, binding: BindingSpec): Promise<number> {
    const data = await this.request<{ rows: number }>(
      `/documents/${docId}/classify`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ binding }),
      },
    );
    return data.rows;
  }

  async rowsPage(docId: string, offset: number, limit = 200): Promise<RowsPage> {
    return this.request<RowsPage>(
      `/documents/${docId}/rows?offset=${offset}&limit=${limit}`,
    );
  }

  /** Walks the 200-row pages until the reported total is covered. */
  async allRows(
    docId: string,
    limit = 200,
  ): Promise<{ rows: RowDto[]; total: number }> {
    const rows: RowDto[] = [];
    let total = 0;
    for (let offset = 0; ; offset += limit) {
      const page = await this.rowsPage(docId, offset, limit);
      rows.push(...page.rows);
      total = page.total;
      if (page.rows.length === 0 || rows.length >= total) break;
    }
    return { rows, total };
  }

  async patchRow(
    docId: string,
    rowId: string,
    action: PatchAction,
  ): Promise<RowDto> {
    const data = await this.request<{ row: RowDto }>(
      `/documents/${docId}/rows/${encodeURIComponent(rowId)}`,
      {
        method: 'PATCH',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(action),
      },
    );
    return data.row;
  }

  exportUrl(docId: string, format: string): string {
    return `${this.baseUrl}/documents/${docId}/export?format=${format}`;
  }

  async exportText(docId: string, format: string): Promise<string> {
    const response = await this.fetchImpl(this.exportUrl(docId, format));
    if (!response.ok) {
      throw new ApiError(response.status, await errorMessage(response));
    }
    return response.text();
  }
}
