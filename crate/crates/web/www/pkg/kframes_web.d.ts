/* tslint:disable */
/* eslint-disable */

/**
 * The frame vectors, `K`, `S_F` and the optimal bounds.
 */
export function demo_frame(seed: number, n: number, s1: number, s2: number, theta: number): string;

/**
 * Relative Loewner margins of the two-map Jensen inequalities on `(S_J, S_{J^c})`.
 */
export function demo_jensen(seed: number, n: number, s1: number, s2: number, theta: number, mask: number): string;

/**
 * `v±` for the subset in `mask`, its complement, and the ratio on the unit circle.
 */
export function demo_split(seed: number, n: number, s1: number, s2: number, theta: number, mask: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly demo_frame: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly demo_jensen: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly demo_split: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
