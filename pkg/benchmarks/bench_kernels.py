"""Compare the compiled and numpy Lindblad kernels.

    python3 benchmarks/bench_kernels.py [--cutoff 5] [--steps 200] [--repeat 3]

Prints the best wall time of each kernel for both backends and the maximum
elementwise difference between their results.
"""
import argparse
import timeit

import numpy as np

from ptmagnon import SystemParams
from ptmagnon.fock import FockSpace
from ptmagnon.kernels import compiled_backend, python_backend
from ptmagnon.lindblad import _effective, build_liouvillian, coherent_state


def setup(cutoff):
    space = FockSpace(cutoff, cutoff)
    p = SystemParams(kappa_a=1.0, g=1.0, chi=0.1, omega_d_amp=0.3)
    L = build_liouvillian(p, space)
    heff, ops, rates = _effective(L.hamiltonian, L.jumps)
    rho0 = coherent_state(space, 0.3, 0.2).entries
    dt = 0.5 / L.norm_bound()
    return heff, ops, rates, rho0, dt


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cutoff", type=int, default=5)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    heff, ops, rates, rho0, dt = setup(args.cutoff)
    d = heff.shape[0]
    backends = [("python", python_backend)]
    comp = compiled_backend()
    if comp is None:
        print("compiled backend not built; timing the numpy fallback only")
    else:
        backends.append(("cython", comp))

    print(f"Hilbert dimension {d}, Liouvillian {d * d}x{d * d}, {args.steps} RK4 steps")
    print(f"{'kernel':<22}{'backend':<10}{'seconds':>12}")
    results = {}
    for name, mod in backends:
        t_rk = best(lambda: mod.rk4_propagate(heff, ops, rates, rho0, dt, args.steps), args.repeat)
        t_as = best(lambda: mod.assemble_liouvillian(heff, ops, rates), args.repeat)
        results[name] = (
            mod.rk4_propagate(heff, ops, rates, rho0, dt, args.steps)[0],
            mod.assemble_liouvillian(heff, ops, rates),
        )
        print(f"{'rk4_propagate':<22}{name:<10}{t_rk:>12.4f}")
        print(f"{'assemble_liouvillian':<22}{name:<10}{t_as:>12.4f}")
    if len(results) == 2:
        (r1, l1), (r2, l2) = results["python"], results["cython"]
        print(f"max |rho_py - rho_cy| = {np.max(np.abs(r1 - r2)):.2e}")
        print(f"max |L_py - L_cy|     = {np.max(np.abs(l1 - l2)):.2e}")


if __name__ == "__main__":
    main()
