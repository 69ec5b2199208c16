/* tslint:disable */
/* eslint-disable */

/**
 * Points with one scalar each.
 */
export class Field {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Eigenvalue of a mode; zero for band plots.
     */
    readonly lambda: number;
    readonly value: Float64Array;
    readonly x: Float64Array;
    readonly y: Float64Array;
}

/**
 * Eigenvalues as parallel arrays.
 */
export class Spectrum {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly im: Float64Array;
    /**
     * 1 where the value survives the spurious-value filter.
     */
    readonly kept: Uint8Array;
    readonly m: number;
    readonly re: Float64Array;
}

export function band(surface: string, bc: string, dx: number, p: number, q: number): Field;

export function mode(surface: string, bc: string, dx: number, p: number, q: number, index: number): Field;

export function spectrum(surface: string, bc: string, dx: number, p: number, q: number, stabilized: boolean): Spectrum;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_field_free: (a: number, b: number) => void;
    readonly __wbg_spectrum_free: (a: number, b: number) => void;
    readonly band: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly field_lambda: (a: number) => number;
    readonly field_value: (a: number) => [number, number];
    readonly field_x: (a: number) => [number, number];
    readonly field_y: (a: number) => [number, number];
    readonly mode: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly spectrum_im: (a: number) => [number, number];
    readonly spectrum_kept: (a: number) => [number, number];
    readonly spectrum_m: (a: number) => number;
    readonly spectrum_re: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
