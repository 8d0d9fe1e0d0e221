/* tslint:disable */
/* eslint-disable */

/**
 * Three frontiers on one shared `R₁` grid: the dependence-balance bound, the
 * cut-set bound, and a reference capacity region.
 */
export class Curves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    cutset(): Float64Array;
    db(): Float64Array;
    reference(): Float64Array;
    /**
     * Maximum sum rates in the same order.
     */
    sums(): Float64Array;
}

/**
 * Cooperative MAC with unit direct gains; the reference is the region
 * without cooperation.
 */
export function cooperativeMac(p: number, sz: number, scoop: number, h12: number, h21: number): Curves;

/**
 * Feedback MAC with `P₁ = P₂ = p`, receiver noise `sz` and feedback noise
 * `sfb` on both links; the reference is the no-feedback region.
 */
export function feedbackMac(p: number, sz: number, sfb: number): Curves;

/**
 * Interference channel with unit powers and noises and cross gains
 * `a = b = cross`: sum-rate bounds against the cooperation gain.
 */
export function interferenceSweep(cross: number, h_max: number, step: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curves_free: (a: number, b: number) => void;
    readonly cooperativeMac: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly curves_cutset: (a: number) => [number, number];
    readonly curves_db: (a: number) => [number, number];
    readonly curves_reference: (a: number) => [number, number];
    readonly curves_sums: (a: number) => [number, number];
    readonly feedbackMac: (a: number, b: number, c: number) => [number, number, number];
    readonly interferenceSweep: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
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
