import { describe, expect, it } from 'vitest'

import { MalformedTrace, renderTrace } from '../src/trace.js'
import { PipelineTrace } from '../src/types.js'

const trace: PipelineTrace = {
  input_kind: 'text',
  transcript: 'කම',
  error_class: 'substitution',
  stage1_output: 'ගම',
  stage2_output: 'ගම',
  latencies: {
    preprocess: { ms: 0.1, skipped: false },
    stt: { ms: 0, skipped: true },
    classify: { ms: 0.2, skipped: false },
    correct_stage1: { ms: 0.3, skipped: false },
    correct_stage2: { ms: 0.4, skipped: false },
    tts: { ms: 0.5, skipped: false },
    total: { ms: 1.5, skipped: false },
  },
  prompts: [],
  audio_out_url: '/v1/audio/abc',
}

describe('renderTrace', () => {
  it('maps the error class to a human label', () => {
    expect(renderTrace(trace).errorClassLabel).toBe('Substitution')
  })

  it('passes unknown error classes through verbatim', () => {
    expect(renderTrace({ ...trace, error_class: 'mystery' }).errorClassLabel).toBe('mystery')
  })

  it('orders latency chips by stage and keeps skipped flags', () => {
    const chips = renderTrace(trace).latencyChips
    expect(chips.map((c) => c.stage)).toEqual([
      'preprocess',
      'stt',
      'classify',
      'correct_stage1',
      'correct_stage2',
      'tts',
      'total',
    ])
    expect(chips[1].skipped).toBe(true)
  })

  it('diffs transcript against the final corrected text', () => {
    const view = renderTrace(trace)
    expect(view.diff).toEqual([
      { text: 'ක', kind: 'removed' },
      { text: 'ග', kind: 'added' },
      { text: 'ම', kind: 'equal' },
    ])
    expect(view.changed).toBe(true)
  })

  it('reports changed=false when correction is a no-op', () => {
    const view = renderTrace({ ...trace, transcript: 'ගම' })
    expect(view.changed).toBe(false)
    expect(view.diff).toEqual([{ text: 'ගම', kind: 'equal' }])
  })

  it('exposes the audio URL, or null when absent', () => {
    expect(renderTrace(trace).audioUrl).toBe('/v1/audio/abc')
    expect(renderTrace({ ...trace, audio_out_url: undefined }).audioUrl).toBeNull()
  })

  it('throws MalformedTrace on missing fields', () => {
    const broken = { ...trace, transcript: undefined } as unknown as PipelineTrace
    expect(() => renderTrace(broken)).toThrow(MalformedTrace)
  })
})
