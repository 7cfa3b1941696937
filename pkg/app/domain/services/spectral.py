"""
Trigonometric interpolation helpers shared by the curve services.
Part of Domain layer.

A periodic sample set f_j = f(j/N) (N even) is represented by the one-sided
coefficients C_k, k = 0..N/2, chosen so that the interpolant is

    f(t) = Re sum_k C_k exp(2 pi i k t)

with the Nyquist coefficient carried at half weight.
"""
from typing import Optional

import numpy as np

# Rows of t processed per block when evaluating series at scattered points.
_EVAL_BLOCK = 2048


def coefficients(samples: np.ndarray) -> np.ndarray:
    """
    One-sided weighted Fourier coefficients of uniform periodic samples.

    Args:
        samples: Array of shape (N,) or (N, d)

    Returns:
        Complex array of shape (N/2 + 1,) or (N/2 + 1, d)
    """
    values = np.asarray(samples, dtype=float)
    count = values.shape[0]
    spectrum = np.fft.rfft(values, axis=0) / count
    weights = np.full(spectrum.shape[0], 2.0)
    weights[0] = 1.0
    if count % 2 == 0:
        weights[-1] = 1.0
    return spectrum * weights.reshape((-1,) + (1,) * (values.ndim - 1))


def _derivative_factors(mode_count: int, order: int) -> np.ndarray:
    k = np.arange(mode_count)
    if order == 0:
        return np.ones(mode_count, dtype=complex)
    return (2j * np.pi * k) ** order


def evaluate_series(coeffs: np.ndarray, t, order: int = 0) -> np.ndarray:
    """
    Evaluate the interpolant (or one of its derivatives) at arbitrary parameters.

    Args:
        coeffs: Output of coefficients()
        t: Scalar or 1-D array of parameters (any real values)
        order: Derivative order (0, 1, 2, ...)

    Returns:
        Array of shape t.shape + coeffs.shape[1:]
    """
    params = np.asarray(t, dtype=float)
    flat = params.reshape(-1)
    scaled = coeffs * _derivative_factors(coeffs.shape[0], order).reshape(
        (-1,) + (1,) * (coeffs.ndim - 1)
    )
    k = np.arange(coeffs.shape[0])
    out = np.empty((flat.size,) + coeffs.shape[1:], dtype=float)
    for start in range(0, flat.size, _EVAL_BLOCK):
        block = flat[start:start + _EVAL_BLOCK]
        phase = np.exp(2j * np.pi * np.outer(block, k))
        out[start:start + block.size] = np.real(np.tensordot(phase, scaled, axes=(1, 0)))
    return out.reshape(params.shape + coeffs.shape[1:])


def node_values(coeffs: np.ndarray, source_count: int, count: int, order: int = 0) -> np.ndarray:
    """
    Values of the interpolant (or a derivative) at count uniform nodes j/count.

    Zero-pads the spectrum when count >= source_count; strides the full-resolution
    values when count divides source_count; falls back to direct summation otherwise.

    Args:
        coeffs: Output of coefficients() for a sample set of size source_count
        source_count: Number of samples the coefficients came from
        count: Number of output nodes (even)
        order: Derivative order

    Returns:
        Array of shape (count,) + coeffs.shape[1:]
    """
    if count >= source_count and count % 2 == 0:
        half = count // 2
        scaled = coeffs * _derivative_factors(coeffs.shape[0], order).reshape(
            (-1,) + (1,) * (coeffs.ndim - 1)
        )
        padded = np.zeros((half + 1,) + coeffs.shape[1:], dtype=complex)
        modes = coeffs.shape[0]
        padded[:modes] = scaled * (count / 2.0)
        padded[0] = scaled[0] * count
        if modes - 1 == half:
            padded[half] = scaled[half] * count
        return np.fft.irfft(padded, n=count, axis=0)
    if source_count % count == 0:
        full = node_values(coeffs, source_count, source_count, order)
        return full[:: source_count // count]
    return evaluate_series(coeffs, np.arange(count) / count, order)


def apply_multiplier(samples: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    """
    Apply a real, even Fourier multiplier (one value per mode k = 0..N/2) to samples.

    Args:
        samples: Array of shape (N,) or (N, d)
        multiplier: Array of shape (N/2 + 1,)

    Returns:
        Filtered samples, same shape as the input
    """
    values = np.asarray(samples, dtype=float)
    spectrum = np.fft.rfft(values, axis=0)
    spectrum *= np.asarray(multiplier, dtype=float).reshape((-1,) + (1,) * (values.ndim - 1))
    return np.fft.irfft(spectrum, n=values.shape[0], axis=0)


def is_power_of_two(value: Optional[int]) -> bool:
    """True for 1, 2, 4, 8, ..."""
    return value is not None and value > 0 and (value & (value - 1)) == 0
