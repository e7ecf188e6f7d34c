/**
 * Span offsets count Unicode scalar values; JavaScript strings are
 * UTF-16, so anything beyond the BMP (emoji) shifts the indices.
 * Every highlight and slice must go through these converters.
 */

export function scalarToUtf16(text: string, scalarIndex: number): number {
  let units = 0;
  let scalars = 0;
  for (const ch of text) {
    if (scalars >= scalarIndex) return units;
    scalars += 1;
    units += ch.length;
  }
  return units; // clamp past the end
}

export function utf16ToScalar(text: string, unitIndex: number): number {
  let units = 0;
  let scalars = 0;
  for (const ch of text) {
    if (units >= unitIndex) return scalars;
    scalars += 1;
    units += ch.length;
  }
  return scalars;
}

/** Substring by scalar-value indexing, i.e. Python's text[start:end]. */
export function sliceByScalars(text: string, start: number, end: number): string {
  return text.slice(scalarToUtf16(text, start), scalarToUtf16(text, end));
}

/** Number of Unicode scalar values in the string. */
export function scalarLength(text: string): number {
  let n = 0;
  for (const _ of text) n += 1;
  return n;
}
