"""Benchmark the integrator kernels on both backends.

Runs the same representative workload (a pointer-lifetime trace at cat size 4
under loss + heating, and a two-gate pulse simulation) in two subprocesses,
one with KERRCAT_NUMBA=1 and one with KERRCAT_NUMBA=0, and reports wall times.
A subprocess per backend is required because the backend is fixed at import.

Usage: python3 benchmarks/kernel_bench.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import numpy as np
import kerrcat as kc
from kerrcat.units import MHZ

kc.warmup()  # JIT compile (numba) or no-op (numpy) before timing

p = kc.KerrCatParams(K=MHZ * 1.2, eps2=4 * MHZ * 1.2, detuning=0.03 * MHZ * 1.2)
tr = kc.default_truncation(p.alpha)
h = kc.kerr_cat_hamiltonian(p, tr)
fr = kc.build_cat_frame(h)
jumps = [kc.JumpTerm(kc.annihilation(tr), 100 / 38.5),
         kc.JumpTerm(kc.creation(tr), 100 * 0.0217 / 38.5)]

t0 = time.perf_counter()
res = kc.evolve(fr.w_plus.to_density_matrix(), h, jumps,
                np.linspace(0.0, 8.0, 65), {"z": fr.z})
t_lindblad = time.perf_counter() - t0

spec = kc.XGateSpec(Tg=0.32, delta0=-8.2 * p.K)
t0 = time.perf_counter()
transfer = kc.x_gate_transfer(spec, p, tr, n_gates=2)
t_gate = time.perf_counter() - t0

print(json.dumps({"backend": kc.backend(),
                  "lindblad_trace_s": round(t_lindblad, 3),
                  "lindblad_steps": res.nsteps,
                  "z_final": res.observables["z"][-1],
                  "two_gate_s": round(t_gate, 3),
                  "transfer": transfer}))
"""


def run_backend(flag: str) -> dict:
    env = dict(os.environ, KERRCAT_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=1,
                        help="repetitions per backend (best time reported)")
    args = parser.parse_args()

    results = {}
    for flag, label in (("0", "numpy"), ("1", "numba")):
        best = None
        for _ in range(args.repeat):
            r = run_backend(flag)
            if best is None or r["lindblad_trace_s"] < best["lindblad_trace_s"]:
                best = r
        results[label] = best
        print(f"{best['backend']:>6}: lindblad trace {best['lindblad_trace_s']:7.3f} s "
              f"({best['lindblad_steps']} steps), two-gate {best['two_gate_s']:7.3f} s, "
              f"transfer {best['transfer']:.4f}")

    if results["numba"]["backend"] != "numba":
        print("note: numba unavailable; both rows ran the numpy fallback")
        return 0
    dz = abs(results["numba"]["z_final"] - results["numpy"]["z_final"])
    dt = abs(results["numba"]["transfer"] - results["numpy"]["transfer"])
    speedup = results["numpy"]["lindblad_trace_s"] / results["numba"]["lindblad_trace_s"]
    print(f"speedup (lindblad): {speedup:.1f}x; backend agreement: "
          f"|dz|={dz:.2e}, |dtransfer|={dt:.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
