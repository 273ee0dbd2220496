import type { PatchAction, RowDto } from './types.js';

/**
 * All rows of one document as last reported by the server, plus the
 * current view page. The UI only ever renders from here; server
 * responses overwrite any local guesswork, so a refetch always renders
 * the same thing.
 */
export interface DocState {
  docId: string;
  rows: RowDto[];
  total: number;
  page: number;
  limit: number;
}

export function emptyState(docId: string, limit = 200): DocState {
  return { docId, rows: [], total: 0, page: 0, limit };
}

export function applyServerRows(
  state: DocState,
  rows: RowDto[],
  total: number,
): DocState {
  const pages = Math.max(1, Math.ceil(total / state.limit));
  return { ...state, rows, total, page: Math.min(state.page, pages - 1) };
}

export function pageCount(state: DocState): number {
  return Math.max(1, Math.ceil(state.total / state.limit));
}

export function gotoPage(state: DocState, page: number): DocState {
  const bounded = Math.min(Math.max(page, 0), pageCount(state) - 1);
  return { ...state, page: bounded };
}

export function visibleRows(state: DocState): RowDto[] {
  const start = state.page * state.limit;
  return state.rows.slice(start, start + state.limit);
}

/** What a patch will look like if the server accepts it. */
export function predictRow(row: RowDto, action: PatchAction): RowDto {
  switch (action.action) {
    case 'CONFIRM':
      return { ...row, review_state: 'CONFIRMED', corrected_type: null };
    case 'CORRECT':
      // The model's prediction stays in object_type; the human label
      // lives in corrected_type and wins as the effective type.
      return {
        ...row,
        review_state: 'CORRECTED',
        corrected_type: action.label,
      };
    case 'EDIT_TEXT':
      return { ...row, object_text: action.text };
  }
}

export interface OptimisticPatch {
  state: DocState;
  revert: (state: DocState) => DocState;
}

/**
 * Applies the predicted row immediately and hands back a revert for the
 * non-200 path. On success the caller must overwrite with the row the
 * server returned instead of keeping the prediction.
 */
export function optimisticPatch(
  state: DocState,
  rowId: string,
  action: PatchAction,
): OptimisticPatch {
  const previous = state.rows.find((r) => r.object_identifier === rowId);
  if (!previous) {
    return { state, revert: (s) => s };
  }
  return {
    state: replaceRow(state, rowId, predictRow(previous, action)),
    revert: (s) => replaceRow(s, rowId, previous),
  };
}

export function replaceRow(
  state: DocState,
  rowId: string,
  row: RowDto,
): DocState {
  const rows = state.rows.map((r) =>
    r.object_identifier === rowId ? row : r,
  );
  return { ...state, rows };
}

/** Fraction of rows a human has signed off; drives the progress bar. */
export function reviewedFraction(rows: RowDto[]): number {
  if (rows.length === 0) return 0;
  const reviewed = rows.filter((r) => r.review_state !== 'UNREVIEWED').length;
  return reviewed / rows.length;
}
