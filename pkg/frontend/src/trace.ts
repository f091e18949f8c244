/** View model for a received PipelineTrace. Every displayed value comes
 * verbatim from a trace field; this module only reshapes for display. */

import { diffClusters, DiffSpan } from './diff.js'
import { ERROR_CLASS_LABELS, PipelineTrace } from './types.js'

export interface LatencyChip {
  stage: string
  ms: number
  skipped: boolean
}

export interface TraceView {
  transcript: string
  errorClassLabel: string
  stage1Output: string
  correctedText: string
  diff: DiffSpan[]
  latencyChips: LatencyChip[]
  audioUrl: string | null
  changed: boolean
}

const STAGE_ORDER = ['preprocess', 'stt', 'classify', 'correct_stage1', 'correct_stage2', 'tts', 'total']

export class MalformedTrace extends Error {}

export function renderTrace(trace: PipelineTrace): TraceView {
  if (
    typeof trace.transcript !== 'string' ||
    typeof trace.stage2_output !== 'string' ||
    typeof trace.latencies !== 'object' ||
    trace.latencies === null
  ) {
    throw new MalformedTrace('trace is missing transcript, stage2_output, or latencies')
  }
  const chips: LatencyChip[] = []
  for (const stage of STAGE_ORDER) {
    const timing = trace.latencies[stage]
    if (timing) chips.push({ stage, ms: timing.ms, skipped: timing.skipped })
  }
  return {
    transcript: trace.transcript,
    errorClassLabel: ERROR_CLASS_LABELS[trace.error_class] ?? trace.error_class,
    stage1Output: trace.stage1_output,
    correctedText: trace.stage2_output,
    diff: diffClusters(trace.transcript, trace.stage2_output),
    latencyChips: chips,
    audioUrl: trace.audio_out_url ?? null,
    changed: trace.transcript !== trace.stage2_output,
  }
}
