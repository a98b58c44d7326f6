"""Scalar backend: binary64 complex by default, mpmath under ``precision(bits)``."""

import cmath
import contextlib
import contextvars

import mpmath

_BITS = contextvars.ContextVar("ratmult_precision_bits", default=None)


@contextlib.contextmanager
def precision(bits):
    """Run the enclosed block with ``bits``-bit mpmath scalars (None = binary64)."""
    if bits is None:
        yield
        return
    if bits < 53:
        raise ValueError("precision_bits must be at least 53")
    token = _BITS.set(int(bits))
    try:
        with mpmath.workprec(int(bits)):
            yield
    finally:
        _BITS.reset(token)


def current_bits():
    return _BITS.get()


def scalar(x):
    """Coerce a number into the active scalar type."""
    if _BITS.get() is None:
        return complex(x)
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        return mpmath.mpc(x)
    if isinstance(x, complex):
        return mpmath.mpc(x.real, x.imag)
    return mpmath.mpc(x)


def unit_root(residue, modulus):
    """exp(2*pi*i*residue/modulus) with the residue reduced first."""
    r = residue % modulus
    if _BITS.get() is None:
        if r == 0:
            return 1 + 0j
        # exact values at the quarter points keep symmetric cases clean
        if 4 * r == modulus:
            return 1j
        if 2 * r == modulus:
            return -1 + 0j
        if 4 * r == 3 * modulus:
            return -1j
        return cmath.exp(2j * cmath.pi * r / modulus)
    return mpmath.expjpi(mpmath.mpf(2 * r) / modulus)


def to_complex(x):
    return complex(x)
