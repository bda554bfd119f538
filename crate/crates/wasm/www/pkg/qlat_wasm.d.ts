/* tslint:disable */
/* eslint-disable */

/**
 * Verificationist and strong Kleene values of a prefix statement over the
 * same qubit family.
 */
export function evaluate_statement(statement: string, state_angle: number, atom_angles: Float64Array): string;

/**
 * Domains of the qubit state at Bloch angle `state_angle` over the family
 * of atoms at `atom_angles`, labelled `a0, a1, …`, plus `0` and `I`.
 */
export function qubit_domains(state_angle: number, atom_angles: Float64Array): string;

/**
 * Measures σz, then the spin at angle `theta`, then σz again on Haar random
 * qubit states. Reports the analytic probability that the second σz result
 * differs from the first next to the simulated frequency.
 */
export function sequential_measurement(theta: number, trials: number, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly evaluate_statement: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly qubit_domains: (a: number, b: number, c: number) => [number, number, number, number];
    readonly sequential_measurement: (a: number, b: number, c: bigint) => [number, number, number, number];
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
