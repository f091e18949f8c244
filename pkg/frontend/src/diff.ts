/** Grapheme-cluster diff used to highlight the edited site between the
 * transcript and the corrected text. */

export interface DiffSpan {
  text: string
  kind: 'equal' | 'removed' | 'added'
}

const segmenter = new Intl.Segmenter('si', { granularity: 'grapheme' })
const ZWJ = '‍'

/** Extended grapheme clusters; pieces ending in ZWJ are merged with
 * their successor so Sinhala conjuncts stay whole. */
export function segmentClusters(text: string): string[] {
  const clusters: string[] = []
  for (const { segment } of segmenter.segment(text)) {
    if (clusters.length > 0 && clusters[clusters.length - 1].endsWith(ZWJ)) {
      clusters[clusters.length - 1] += segment
    } else {
      clusters.push(segment)
    }
  }
  return clusters
}

/** LCS-based cluster diff of two strings. */
export function diffClusters(before: string, after: string): DiffSpan[] {
  const a = segmentClusters(before)
  const b = segmentClusters(after)
  const n = a.length
  const m = b.length
  const lcs: number[][] = Array.from({ length: n + 1 }, () => new Array(m + 1).fill(0))
  for (let i = n - 1; i >= 0; i--) {
    for (let j = m - 1; j >= 0; j--) {
      lcs[i][j] = a[i] === b[j] ? lcs[i + 1][j + 1] + 1 : Math.max(lcs[i + 1][j], lcs[i][j + 1])
    }
  }
  const spans: DiffSpan[] = []
  const push = (text: string, kind: DiffSpan['kind']) => {
    if (!text) return
    const last = spans[spans.length - 1]
    if (last && last.kind === kind) {
      last.text += text
    } else {
      spans.push({ text, kind })
    }
  }
  let i = 0
  let j = 0
  while (i < n && j < m) {
    if (a[i] === b[j]) {
      push(a[i], 'equal')
      i++
      j++
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      push(a[i], 'removed')
      i++
    } else {
      push(b[j], 'added')
      j++
    }
  }
  while (i < n) push(a[i++], 'removed')
  while (j < m) push(b[j++], 'added')
  return spans
}
