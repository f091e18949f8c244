/** Microphone capture. Records via Web Audio and yields a mono WAV
 * PCM16 blob so the service always receives a format it can decode. */

import { downmixToMono, encodeWavPcm16 } from './wav.js'

export class Recorder {
  private chunks: Blob[] = []
  private mediaRecorder: MediaRecorder | null = null
  private stream: MediaStream | null = null

  async start(): Promise<void> {
    if (this.mediaRecorder) throw new Error('already recording')
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true })
    this.chunks = []
    this.mediaRecorder = new MediaRecorder(this.stream)
    this.mediaRecorder.ondataavailable = (event) => {
      if (event.data.size > 0) this.chunks.push(event.data)
    }
    this.mediaRecorder.start()
  }

  /** Stop capture and return the recording re-encoded as WAV PCM16. */
  async stop(): Promise<Blob> {
    const recorder = this.mediaRecorder
    if (!recorder) throw new Error('not recording')
    const stopped = new Promise<void>((resolve) => {
      recorder.onstop = () => resolve()
    })
    recorder.stop()
    await stopped
    this.stream?.getTracks().forEach((track) => track.stop())
    this.mediaRecorder = null
    this.stream = null
    const raw = new Blob(this.chunks, { type: recorder.mimeType })
    return recordingToWav(raw)
  }
}

async function recordingToWav(raw: Blob): Promise<Blob> {
  const ctx = new AudioContext()
  try {
    const decoded = await ctx.decodeAudioData(await raw.arrayBuffer())
    const channels: Float32Array[] = []
    for (let c = 0; c < decoded.numberOfChannels; c++) channels.push(decoded.getChannelData(c))
    const wav = encodeWavPcm16(downmixToMono(channels), decoded.sampleRate)
    return new Blob([wav], { type: 'audio/wav' })
  } finally {
    await ctx.close()
  }
}
