/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_field_free: (a: number, b: number) => void;
export const __wbg_spectrum_free: (a: number, b: number) => void;
export const band: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const field_lambda: (a: number) => number;
export const field_value: (a: number) => [number, number];
export const field_x: (a: number) => [number, number];
export const field_y: (a: number) => [number, number];
export const mode: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const spectrum_im: (a: number) => [number, number];
export const spectrum_kept: (a: number) => [number, number];
export const spectrum_m: (a: number) => number;
export const spectrum_re: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
