// Thin fetch client for the session service. The fetch implementation is
// injectable so tests can run without a browser or a live server.

import {
  ChannelName,
  DiagramDto,
  DiagramKind,
  EditKind,
  EditResponse,
  RectDto,
  SelectResponse,
  SessionInfo,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class StaleRevisionError extends ApiError {
  constructor(message: string) {
    super(409, message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorMessage(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { error?: string };
    return body.error ?? resp.statusText;
  } catch {
    return resp.statusText;
  }
}

export class ApiClient {
  constructor(
    readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async checked(resp: Response): Promise<Response> {
    if (resp.status === 409) {
      throw new StaleRevisionError(await errorMessage(resp));
    }
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorMessage(resp));
    }
    return resp;
  }

  async uploadImage(bytes: ArrayBuffer | Uint8Array): Promise<SessionInfo> {
    const resp = await this.checked(
      await this.fetchFn(`${this.base}/session`, {
        method: "POST",
        headers: { "content-type": "application/octet-stream" },
        body: bytes as BodyInit,
      }),
    );
    return (await resp.json()) as SessionInfo;
  }

  async diagram(channel: ChannelName, kind: DiagramKind): Promise<DiagramDto> {
    const resp = await this.checked(
      await this.fetchFn(`${this.base}/diagram?channel=${channel}&kind=${kind}`),
    );
    return (await resp.json()) as DiagramDto;
  }

  async select(
    revision: number,
    channel: ChannelName,
    kind: DiagramKind,
    rects: RectDto[],
  ): Promise<SelectResponse> {
    const resp = await this.checked(
      await this.fetchFn(`${this.base}/select`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ revision, channel, kind, rects }),
      }),
    );
    return (await resp.json()) as SelectResponse;
  }

  async edit(revision: number, op: EditKind, scale: number): Promise<EditResponse> {
    const resp = await this.checked(
      await this.fetchFn(`${this.base}/edit`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ revision, op, scale }),
      }),
    );
    return (await resp.json()) as EditResponse;
  }

  async imageBytes(): Promise<ArrayBuffer> {
    const resp = await this.checked(await this.fetchFn(`${this.base}/image.png`));
    return resp.arrayBuffer();
  }

  async maskBytes(): Promise<ArrayBuffer> {
    const resp = await this.checked(await this.fetchFn(`${this.base}/mask.png`));
    return resp.arrayBuffer();
  }

  async log(): Promise<string> {
    const resp = await this.checked(await this.fetchFn(`${this.base}/log`));
    return resp.text();
  }

  /** Cache-busted preview URL; the revision makes reloads deterministic. */
  imageUrl(revision: number): string {
    return `${this.base}/image.png?rev=${revision}`;
  }

  maskUrl(revision: number, selectionKey: string): string {
    return `${this.base}/mask.png?rev=${revision}&sel=${selectionKey}`;
  }
}
