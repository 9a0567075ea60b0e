/** Typed client for the storyrec service; the UI's only source of numbers. */

import type {
  ApiStory,
  DimensionView,
  FeedbackResult,
  MovieDetail,
  SessionSummary,
  UserHistory,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep defaults
  }
  return new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json", accept: "application/json" },
      ...init,
    });
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  createSession(userId: number, seed?: number): Promise<SessionSummary> {
    return this.request<SessionSummary>("/sessions", {
      method: "POST",
      body: JSON.stringify(seed === undefined ? { user_id: userId } : { user_id: userId, seed }),
    });
  }

  nextStory(sessionId: string): Promise<ApiStory> {
    return this.request<ApiStory>(`/sessions/${sessionId}/story`);
  }

  sendThumb(sessionId: string, movieId: number, thumb: "up" | "down"): Promise<FeedbackResult> {
    return this.request<FeedbackResult>(`/sessions/${sessionId}/feedback`, {
      method: "POST",
      body: JSON.stringify({ movie_id: movieId, thumb }),
    });
  }

  sendPreferences(sessionId: string, f: number, t: number): Promise<SessionSummary> {
    return this.request<SessionSummary>(`/sessions/${sessionId}/preferences`, {
      method: "POST",
      body: JSON.stringify({ f, t }),
    });
  }

  movieDetails(movieId: number, userId?: number): Promise<MovieDetail> {
    const query = userId === undefined ? "" : `?user=${userId}`;
    return this.request<MovieDetail>(`/movies/${movieId}${query}`);
  }

  dimensionView(sessionId: string, dimension: number): Promise<DimensionView> {
    return this.request<DimensionView>(`/sessions/${sessionId}/dimension/${dimension}`);
  }

  userHistory(userId: number): Promise<UserHistory> {
    return this.request<UserHistory>(`/users/${userId}/history`);
  }
}
