/* tslint:disable */
/* eslint-disable */

/**
 * Chunk offsets and DP cell counts for overlapped chunking.
 */
export function chunkPlan(packet_len: number, chunk_len: number, overlap: number): string;

/**
 * `{"substring": n, "subsequence": m}` for two UTF-8 strings compared bytewise.
 */
export function lcsLengths(a: string, b: string): string;

/**
 * Bicoherence map of a synthetic three-tone signal.
 */
export function triadBicoherence(coupled: boolean, seg_len: number, n_seg: number, f1: number, f2: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly chunkPlan: (a: number, b: number, c: number) => [number, number, number, number];
    readonly lcsLengths: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly triadBicoherence: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
