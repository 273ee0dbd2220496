import type { RowDto, UnitDto } from '../src/types.js';

export function makeRow(overrides: Partial<RowDto> = {}): RowDto {
  return {
    object_identifier: 'd1-R00001',
    object_number: '1.1',
    object_heading: '',
    object_text: 'The system shall log every request.',
    object_level: 2,
    kind: 'TEXT',
    object_type: 'FUNC_REQ',
    confidence: 0.92,
    review_state: 'UNREVIEWED',
    corrected_type: null,
    ...overrides,
  };
}

export function makeUnit(overrides: Partial<UnitDto> = {}): UnitDto {
  return {
    text: 'Some line of source text.',
    page: 0,
    line_index: 0,
    page_line_count: 10,
    md_heading_depth: 0,
    is_table_row: false,
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

export async function waitFor(
  check: () => boolean,
  timeoutMs = 15_000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (check()) return;
    await new Promise((resolve) => setTimeout(resolve, 15));
  }
  throw new Error('condition not met in time');
}

export async function waitForAsync(
  check: () => Promise<boolean>,
  timeoutMs = 15_000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (await check()) return;
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
  throw new Error('condition not met in time');
}
