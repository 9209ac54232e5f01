// Optional runtime dependency; installed separately when real model
// inference is wanted. Loaded via dynamic import in summarizers.ts.
declare module "@xenova/transformers" {
  export function pipeline(task: string, model?: string, options?: unknown): Promise<any>;
}
