/** DOM glue: wires the state machine, API client, recorder, and trace
 * view model to the page. No business logic lives here. */

import { ApiClient } from './api.js'
import { Recorder } from './recorder.js'
import { initialSession, reduce, canPlay, canRecord, SessionEvent, SessionView } from './state.js'
import { renderTrace, MalformedTrace } from './trace.js'

const api = new ApiClient()
const recorder = new Recorder()
let session: SessionView = initialSession

const $ = (id: string) => document.getElementById(id)!

function dispatch(event: SessionEvent): void {
  session = reduce(session, event)
  render()
}

function render(): void {
  const recordBtn = $('record') as HTMLButtonElement
  const submitBtn = $('submit') as HTMLButtonElement
  const playBtn = $('play') as HTMLButtonElement
  const banner = $('banner')
  const textInput = $('text-input') as HTMLInputElement

  recordBtn.textContent = session.phase === 'recording' ? 'Stop recording' : 'Record'
  recordBtn.disabled = !(canRecord(session) || session.phase === 'recording')
  submitBtn.disabled = session.phase !== 'idle' || textInput.value.trim() === ''
  playBtn.disabled = !canPlay(session)
  banner.hidden = session.banner === null
  banner.textContent = session.banner ?? ''

  const result = $('result')
  if (session.trace === null) {
    result.hidden = true
    return
  }
  try {
    const view = renderTrace(session.trace)
    result.hidden = false
    $('transcript').textContent = view.transcript
    $('error-class').textContent = view.errorClassLabel
    $('corrected').replaceChildren(
      ...view.diff.map((span) => {
        const el = document.createElement('span')
        el.className = `diff-${span.kind}`
        el.textContent = span.text
        return el
      }),
    )
    $('latencies').replaceChildren(
      ...view.latencyChips.map((chip) => {
        const el = document.createElement('span')
        el.className = 'chip'
        el.textContent = chip.skipped ? `${chip.stage}: skipped` : `${chip.stage}: ${chip.ms.toFixed(1)} ms`
        return el
      }),
    )
  } catch (err) {
    if (err instanceof MalformedTrace) {
      result.hidden = true
      session = reduce(session, { type: 'request_failed', message: err.message })
      banner.hidden = false
      banner.textContent = session.banner ?? ''
    } else {
      throw err
    }
  }
}

async function submitText(): Promise<void> {
  const text = ($('text-input') as HTMLInputElement).value.trim()
  if (!text) return
  dispatch({ type: 'submit' })
  try {
    const trace = await api.pipelineFromText(text)
    dispatch({ type: 'trace_received', trace })
  } catch (err) {
    dispatch({ type: 'request_failed', message: err instanceof Error ? err.message : String(err) })
  }
}

async function toggleRecording(): Promise<void> {
  if (session.phase === 'recording') {
    try {
      const wav = await recorder.stop()
      dispatch({ type: 'record_stop' })
      dispatch({ type: 'submit' })
      const trace = await api.pipelineFromAudio(wav)
      dispatch({ type: 'trace_received', trace })
    } catch (err) {
      dispatch({ type: 'request_failed', message: err instanceof Error ? err.message : String(err) })
    }
    return
  }
  try {
    await recorder.start()
    dispatch({ type: 'record_start' })
  } catch (err) {
    dispatch({ type: 'request_failed', message: err instanceof Error ? err.message : String(err) })
  }
}

function playCorrected(): void {
  if (!canPlay(session) || !session.trace?.audio_out_url) return
  const audio = new Audio(api.resolve(session.trace.audio_out_url))
  dispatch({ type: 'play_start' })
  audio.onended = () => dispatch({ type: 'play_end' })
  audio.onerror = () => dispatch({ type: 'request_failed', message: 'audio playback failed' })
  void audio.play()
}

export function init(): void {
  $('submit').addEventListener('click', () => void submitText())
  $('record').addEventListener('click', () => void toggleRecording())
  $('play').addEventListener('click', playCorrected)
  $('text-input').addEventListener('input', render)
  $('banner').addEventListener('click', () => dispatch({ type: 'dismiss_banner' }))
  render()
}

if (typeof document !== 'undefined' && document.readyState !== 'loading') {
  init()
} else if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', init)
}
