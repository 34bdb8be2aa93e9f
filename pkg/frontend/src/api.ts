/** Typed client for the review service's JSON API.
 *
 * This module is the app's only doorway to formulation data. Everything
 * numeric that the UI shows comes back through these calls verbatim;
 * nothing downstream recomputes it.
 */

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export interface EntitySpan {
  start: number;
  end: number;
  label: string;
  text: string;
}

export interface CanonicalRowPreview {
  variables: string[];
  coefficients: number[];
  rhs: number;
}

export interface Slot {
  index: number;
  status: string;
  declaration_ir: string | null;
  source_text: string;
  error: string | null;
  rendered?: string;
  canonical_row?: CanonicalRowPreview | null;
}

export interface SuggestionFailure {
  index: number;
  error: { code: string; message: string };
  source_text: string;
}

export type Suggestion = Slot | SuggestionFailure;

export function isFailure(item: Suggestion): item is SuggestionFailure {
  return typeof (item as SuggestionFailure).error === "object" &&
    (item as SuggestionFailure).error !== null;
}

/** Body of a successful session creation. */
export interface SessionCreated {
  session_id: string;
  entities: EntitySpan[];
}

export interface SessionModel {
  session_id: string;
  description: string;
  entities: EntitySpan[];
  cursor: number;
  declarations: Slot[];
}

export interface SolveConflict {
  row: number;
  declaration_index: number;
  source_text: string;
  rendered: string;
}

export interface SolveResult {
  status: "optimal" | "infeasible" | "unbounded";
  direction: string;
  objective_name: string;
  variables: string[];
  // optimal
  objective_value?: number;
  point?: number[];
  assignment?: Record<string, number>;
  binding_constraints?: number[];
  // infeasible
  infeasible_rows?: number[];
  conflicts?: SolveConflict[];
}

/** A non-2xx service response, carrying the service's error payload. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly tag?: string,
    readonly missing?: string[],
  ) {
    super(message);
  }
}

export type EditPayload =
  | { ir: string }
  | Partial<
      Record<"limit" | "operator" | "const_dir" | "obj_dir" | "obj_name", string>
    >;

export class ServiceClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  private async request(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<unknown> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.status === 204) return null;
    const payload = await response.json();
    if (!response.ok) {
      const data = payload as {
        code?: string;
        message?: string;
        tag?: string;
        missing?: string[];
      };
      throw new ApiError(
        response.status,
        data.code ?? "error",
        data.message ?? response.statusText,
        data.tag,
        data.missing,
      );
    }
    return payload;
  }

  createSession(
    description: string,
    entities?: EntitySpan[],
  ): Promise<SessionCreated> {
    const body: Record<string, unknown> = { description };
    if (entities) body.entities = entities;
    return this.request("POST", "/sessions", body) as Promise<SessionCreated>;
  }

  getSession(sid: string): Promise<SessionModel> {
    return this.request("GET", `/sessions/${sid}`) as Promise<SessionModel>;
  }

  nextSuggestion(sid: string): Promise<Suggestion | null> {
    return this.request(
      "GET",
      `/sessions/${sid}/suggestions/next`,
    ) as Promise<Suggestion | null>;
  }

  accept(sid: string, index: number): Promise<Slot> {
    return this.request(
      "POST",
      `/sessions/${sid}/declarations/${index}/accept`,
    ) as Promise<Slot>;
  }

  reject(sid: string, index: number): Promise<Slot> {
    return this.request(
      "POST",
      `/sessions/${sid}/declarations/${index}/reject`,
    ) as Promise<Slot>;
  }

  edit(sid: string, index: number, payload: EditPayload): Promise<Slot> {
    return this.request(
      "POST",
      `/sessions/${sid}/declarations/${index}/edit`,
      payload,
    ) as Promise<Slot>;
  }

  retype(sid: string, index: number, constType: string): Promise<Slot> {
    return this.request(
      "POST",
      `/sessions/${sid}/declarations/${index}/retype`,
      { const_type: constType },
    ) as Promise<Slot>;
  }

  solve(sid: string): Promise<SolveResult> {
    return this.request(
      "POST",
      `/sessions/${sid}/solve`,
    ) as Promise<SolveResult>;
  }
}
