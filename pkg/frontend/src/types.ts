export type RowKind = 'TITLE' | 'TEXT';

export type ClassLabel = 'HEADER' | 'INFO' | 'FUNC_REQ' | 'NON_FUNC_REQ';

export type ReviewState = 'UNREVIEWED' | 'CONFIRMED' | 'CORRECTED';

export const CLASS_LABELS: readonly ClassLabel[] = [
  'HEADER',
  'INFO',
  'FUNC_REQ',
  'NON_FUNC_REQ',
];

export interface RowDto {
  object_identifier: string;
  object_number: string;
  object_heading: string;
  object_text: string;
  object_level: number;
  kind: RowKind;
  object_type: ClassLabel | null;
  confidence: number | null;
  review_state: ReviewState;
  corrected_type: ClassLabel | null;
}

export interface UnitDto {
  text: string;
  page: number;
  line_index: number;
  page_line_count: number;
  md_heading_depth: number;
  is_table_row: boolean;
}

export interface DocumentSummary {
  doc_id: string;
  filename: string;
  mode: string;
  extracted: boolean;
  classified: boolean;
}

export interface RowsPage {
  doc_id: string;
  total: number;
  offset: number;
  limit: number;
  rows: RowDto[];
}

export interface ExtractResult {
  doc_id: string;
  tuples: number;
  rows: number;
  removed_units: number;
}

export interface BindingSpec {
  kind: 'builtin' | 'external';
  model_path?: string;
  endpoint?: string;
  timeout_ms?: number;
}

export type PatchAction =
  | { action: 'CONFIRM' }
  | { action: 'CORRECT'; label: ClassLabel }
  | { action: 'EDIT_TEXT'; text: string };

export type ExportFormat = 'csv' | 'json' | 'yaml';
