/** Wire types for the pipeline service responses. */

export interface StageTiming {
  ms: number
  skipped: boolean
}

export interface PipelineTrace {
  input_kind: 'audio' | 'text'
  transcript: string
  error_class: string
  stage1_output: string
  stage2_output: string
  latencies: Record<string, StageTiming>
  prompts: string[]
  audio_out_url?: string
  audio_out_b64?: string | null
}

export interface PipelineFailure {
  error: string
  stage?: string
  trace?: Partial<PipelineTrace>
}

export const ERROR_CLASS_LABELS: Record<string, string> = {
  substitution: 'Substitution',
  insertion: 'Insertion',
  omission: 'Omission',
  reversal: 'Reversal',
  no_error: 'No error',
  complex: 'Complex',
}
