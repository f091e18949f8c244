/** Thin client for the pipeline service. `fetch` is injectable so tests
 * can run without a server. */

import { PipelineFailure, PipelineTrace } from './types.js'

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly stage?: string,
    readonly partialTrace?: Partial<PipelineTrace>,
  ) {
    super(message)
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /** Resolve a service-relative path (e.g. audio_out_url) to a full URL. */
  resolve(path: string): string {
    return this.baseUrl + path
  }

  async health(): Promise<boolean> {
    try {
      const res = await this.fetchImpl(this.resolve('/v1/health'))
      return res.ok
    } catch {
      return false
    }
  }

  async pipelineFromText(text: string): Promise<PipelineTrace> {
    const res = await this.fetchImpl(this.resolve('/v1/pipeline'), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ text }),
    })
    return this.unwrap(res)
  }

  async pipelineFromAudio(wav: Blob): Promise<PipelineTrace> {
    const form = new FormData()
    form.append('file', wav, 'recording.wav')
    const res = await this.fetchImpl(this.resolve('/v1/pipeline'), {
      method: 'POST',
      body: form,
    })
    return this.unwrap(res)
  }

  private async unwrap(res: Response): Promise<PipelineTrace> {
    let body: unknown
    try {
      body = await res.json()
    } catch {
      throw new ApiError('malformed response from service', res.status)
    }
    if (!res.ok) {
      const failure = body as PipelineFailure
      throw new ApiError(
        failure.error ?? `service returned ${res.status}`,
        res.status,
        failure.stage,
        failure.trace,
      )
    }
    return body as PipelineTrace
  }
}
