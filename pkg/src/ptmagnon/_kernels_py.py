"""Pure-numpy reference kernels.

Same signatures as the compiled ``_kernels`` module.  Generator convention:

    drho/dt = -i Heff rho + i rho Heff^dag + sum_k 2 r_k o_k rho o_k^dag

with Heff = H - i sum_k r_k o_k^dag o_k, which is the factor-2 Lindblad form.
"""
import numpy as np

BACKEND = "python"


def lindblad_rhs(heff, jumps, rates, rho):
    out = -1j * (heff @ rho) + 1j * (rho @ heff.conj().T)
    for r, o in zip(rates, jumps):
        out += 2.0 * r * (o @ rho @ o.conj().T)
    return out


def rk4_propagate(heff, jumps, rates, rho0, dt, nsteps, blowup=1e6):
    """Fixed-step RK4.  Returns (rho, steps_taken, status); status 1 = diverged."""
    heff = np.ascontiguousarray(heff, dtype=complex)
    jumps = np.ascontiguousarray(jumps, dtype=complex)
    rates = np.ascontiguousarray(rates, dtype=float)
    rho = np.array(rho0, dtype=complex, copy=True)
    tr0 = np.trace(rho)
    for step in range(nsteps):
        k1 = lindblad_rhs(heff, jumps, rates, rho)
        k2 = lindblad_rhs(heff, jumps, rates, rho + 0.5 * dt * k1)
        k3 = lindblad_rhs(heff, jumps, rates, rho + 0.5 * dt * k2)
        k4 = lindblad_rhs(heff, jumps, rates, rho + dt * k3)
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        big = np.max(np.abs(rho))
        if not np.isfinite(big) or big > blowup or abs(np.trace(rho) - tr0) > 1e-6:
            return rho, step + 1, 1
    return rho, nsteps, 0


def assemble_liouvillian(heff, jumps, rates):
    """Dense superoperator on column-stacked vec(rho) (index i + j*d)."""
    heff = np.asarray(heff, dtype=complex)
    d = heff.shape[0]
    eye = np.eye(d)
    L = -1j * np.kron(eye, heff) + 1j * np.kron(heff.conj(), eye)
    for r, o in zip(rates, jumps):
        L += 2.0 * r * np.kron(np.asarray(o).conj(), o)
    return L
