/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curves_free: (a: number, b: number) => void;
export const cooperativeMac: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const curves_cutset: (a: number) => [number, number];
export const curves_db: (a: number) => [number, number];
export const curves_reference: (a: number) => [number, number];
export const curves_sums: (a: number) => [number, number];
export const feedbackMac: (a: number, b: number, c: number) => [number, number, number];
export const interferenceSweep: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
