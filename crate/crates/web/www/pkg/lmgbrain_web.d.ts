/* tslint:disable */
/* eslint-disable */

/**
 * A finished run.
 */
export class Series {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * One of `t, E, r, U, fidelity, S_block, S_linear, energy, norm`; empty if unknown.
     */
    column(name: string): Float64Array;
    is_empty(): boolean;
    len(): number;
    /**
     * Time between records.
     */
    sample_interval(): number;
    spectrum(column: string, hann: boolean): SpectrumView;
}

export class SpectrumView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    dominant(): number;
    frequencies(): Float64Array;
    power(): Float64Array;
}

/**
 * `[S_block in bits, S_linear]` for the same state as [`block_weights`].
 */
export function block_entropies(qubits: number, excited: number, block: number): Float64Array;

export function block_weights(qubits: number, excited: number, block: number): Float64Array;

/**
 * Preset names, one per line.
 */
export function preset_names(): string;

export function simulate_custom(qubits: number, gamma: number, g0: number, tau_r: number, tau_f: number, u_base: number, excited: number, t_max: number): Series;

export function simulate_preset(name: string, t_max: number): Series;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_series_free: (a: number, b: number) => void;
    readonly __wbg_spectrumview_free: (a: number, b: number) => void;
    readonly block_entropies: (a: number, b: number, c: number) => [number, number, number, number];
    readonly block_weights: (a: number, b: number, c: number) => [number, number, number, number];
    readonly preset_names: () => [number, number];
    readonly series_column: (a: number, b: number, c: number) => [number, number];
    readonly series_is_empty: (a: number) => number;
    readonly series_len: (a: number) => number;
    readonly series_sample_interval: (a: number) => number;
    readonly series_spectrum: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly simulate_custom: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly simulate_preset: (a: number, b: number, c: number) => [number, number, number];
    readonly spectrumview_dominant: (a: number) => number;
    readonly spectrumview_frequencies: (a: number) => [number, number];
    readonly spectrumview_power: (a: number) => [number, number];
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
