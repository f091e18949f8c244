/** Session state machine: recording and playback are mutually
 * exclusive; at most one pipeline request is in flight; playback is
 * only enabled once a trace with audio arrived. */

import { PipelineTrace } from './types.js'

export type Phase = 'idle' | 'recording' | 'submitting' | 'playing'

export interface SessionView {
  phase: Phase
  trace: PipelineTrace | null
  banner: string | null
}

export type SessionEvent =
  | { type: 'record_start' }
  | { type: 'record_stop' }
  | { type: 'submit' }
  | { type: 'trace_received'; trace: PipelineTrace }
  | { type: 'request_failed'; message: string }
  | { type: 'play_start' }
  | { type: 'play_end' }
  | { type: 'dismiss_banner' }

export const initialSession: SessionView = { phase: 'idle', trace: null, banner: null }

export function canRecord(s: SessionView): boolean {
  return s.phase === 'idle'
}

export function canPlay(s: SessionView): boolean {
  return s.phase === 'idle' && s.trace !== null && !!s.trace.audio_out_url
}

export function reduce(s: SessionView, event: SessionEvent): SessionView {
  switch (event.type) {
    case 'record_start':
      if (!canRecord(s)) return s
      return { ...s, phase: 'recording', banner: null }
    case 'record_stop':
      return s.phase === 'recording' ? { ...s, phase: 'idle' } : s
    case 'submit':
      if (s.phase !== 'idle' && s.phase !== 'recording') return s
      return { ...s, phase: 'submitting', banner: null }
    case 'trace_received':
      return { phase: 'idle', trace: event.trace, banner: null }
    case 'request_failed':
      // a failed request must not leave a stale trace on screen
      return { phase: 'idle', trace: null, banner: event.message }
    case 'play_start':
      if (!canPlay(s)) return s
      return { ...s, phase: 'playing' }
    case 'play_end':
      return s.phase === 'playing' ? { ...s, phase: 'idle' } : s
    case 'dismiss_banner':
      return { ...s, banner: null }
  }
}
