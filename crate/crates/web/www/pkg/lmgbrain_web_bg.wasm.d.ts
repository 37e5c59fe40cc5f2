/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_series_free: (a: number, b: number) => void;
export const __wbg_spectrumview_free: (a: number, b: number) => void;
export const block_entropies: (a: number, b: number, c: number) => [number, number, number, number];
export const block_weights: (a: number, b: number, c: number) => [number, number, number, number];
export const preset_names: () => [number, number];
export const series_column: (a: number, b: number, c: number) => [number, number];
export const series_is_empty: (a: number) => number;
export const series_len: (a: number) => number;
export const series_sample_interval: (a: number) => number;
export const series_spectrum: (a: number, b: number, c: number, d: number) => [number, number, number];
export const simulate_custom: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const simulate_preset: (a: number, b: number, c: number) => [number, number, number];
export const spectrumview_dominant: (a: number) => number;
export const spectrumview_frequencies: (a: number) => [number, number];
export const spectrumview_power: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
