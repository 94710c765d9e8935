// Typed client for the trickcheck session API. The browser side never
// computes trick semantics: everything it shows comes from these responses.

export interface PendingChoice {
  name: string;
  kind: string;
  prompt: string;
  domain: number[];
}

export interface CheckpointJson {
  label: number;
  deck: string;
  p: boolean;
  empty: boolean;
}

export interface PathRecordJson {
  binding: Record<string, number>;
  hidden: string;
  checkpoints: CheckpointJson[];
  final: 'yes' | 'no';
  actions: string[];
}

export interface SessionState {
  session_id: string;
  deck: string;
  done: boolean;
  hidden_taken: boolean;
  pending: PendingChoice | null;
  accepted: { name: string; value: number }[];
  checkpoints: CheckpointJson[];
  record: PathRecordJson | null;
  reveal: 'match' | 'mismatch' | null;
}

export interface EvidenceJson {
  kind: 'witness' | 'counterexample';
  binding: Record<string, number>;
  checkpoints: CheckpointJson[];
  marked_index: number | null;
  marked_label: number | null;
}

export interface CheckResponse {
  formula: string;
  verdict: boolean;
  m: number;
  slot_mode: string;
  evidence: EvidenceJson | null;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public domain?: number[],
  ) {
    super(message);
  }
}

const baseUrl = '';

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${baseUrl}${path}`, init);
  } catch {
    throw new ApiError(0, 'cannot reach the session service');
  }
  if (!response.ok) {
    let message = `request failed (${response.status})`;
    let domain: number[] | undefined;
    try {
      const body = (await response.json()) as { error?: string; domain?: number[] };
      if (body.error) message = body.error;
      domain = body.domain;
    } catch {
      // non-JSON error body; keep the status message
    }
    throw new ApiError(response.status, message, domain);
  }
  return response.json() as Promise<T>;
}

function post(body: unknown): RequestInit {
  return {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  };
}

export function createSession(): Promise<SessionState> {
  return request<SessionState>('/api/session', post({}));
}

export function getSession(sessionId: string): Promise<SessionState> {
  return request<SessionState>(`/api/session/${sessionId}`);
}

export function choose(
  sessionId: string,
  value: number | string,
): Promise<SessionState> {
  return request<SessionState>(
    `/api/session/${sessionId}/choose`,
    post({ value }),
  );
}

export function checkFormula(formula: string): Promise<CheckResponse> {
  return request<CheckResponse>('/api/check', post({ formula }));
}

export async function trickScript(): Promise<string> {
  const response = await fetch(`${baseUrl}/api/trick`);
  if (!response.ok) throw new ApiError(response.status, 'cannot load the script');
  return response.text();
}
