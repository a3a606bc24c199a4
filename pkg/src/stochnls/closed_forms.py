"""Direct transcriptions of the seven determinate solitary-wave fields.

These are written independently of the general evaluator, keeping the
nested-fraction structure of the published formulas, and exist solely as
the second route of a dual-route check: field.eval_psi driven by the
coefficient catalog must agree with these pointwise.

Each function returns psi_n(x, t) given the model data and the already
evaluated noise value L(t).  The exponential argument is k*(x + 2*alpha*t)
with the case's own wave number k.  (For the two compressed-kink cases the
typeset field drops the factor 1/sqrt(2) from k in the exponent; the
coefficients, which do solve the system, pin k = -+ i*sqrt(H)/sqrt(2), and
only that choice makes the assembled field solve the wave equation, so the
transcription uses it.)
"""

from __future__ import annotations

import cmath
from math import sqrt


def _phase(x, t, alpha, upsilon, sigma, levy_value):
    return cmath.exp(1j * (alpha * x + upsilon * t + sigma * levy_value))


def psi_case1(x, t, H, B0, A, alpha, upsilon, sigma, levy_value):
    k = 1j * cmath.sqrt(2 * H)
    E = A * cmath.exp(k * (x + 2 * alpha * t))
    num = 1j * cmath.sqrt(H) * B0 / sqrt(2) - 1j * cmath.sqrt(2 * H) * B0 / (1 + E)
    den = B0 - 2 * B0 / (1 + E)
    return (num / den) * _phase(x, t, alpha, upsilon, sigma, levy_value)


def psi_case2(x, t, H, B0, A, alpha, upsilon, sigma, levy_value):
    k = 1j * cmath.sqrt(2 * H)
    E = A * cmath.exp(k * (x + 2 * alpha * t))
    num = 1j * cmath.sqrt(H) * B0
    den = sqrt(2) * (B0 - 2 * B0 / (1 + E))
    return (num / den) * _phase(x, t, alpha, upsilon, sigma, levy_value)


def psi_case3(x, t, H, B0, A, alpha, upsilon, sigma, levy_value):
    k = 1j * cmath.sqrt(2 * H)
    E = A * cmath.exp(k * (x + 2 * alpha * t))
    num = -1j * cmath.sqrt(H) * B0 / sqrt(2) + 1j * cmath.sqrt(2 * H) * B0 / (1 + E)
    den = B0 - 2 * B0 / (1 + E)
    return (num / den) * _phase(x, t, alpha, upsilon, sigma, levy_value)


def psi_case4(x, t, H, B0, A, alpha, upsilon, sigma, levy_value):
    k = -1j * cmath.sqrt(H) / sqrt(2)
    E = A * cmath.exp(k * (x + 2 * alpha * t))
    num = (-1j * cmath.sqrt(H) * B0 / sqrt(2)
           - 1j * cmath.sqrt(2 * H) * B0 / (1 + E) ** 2
           + 1j * cmath.sqrt(2 * H) * B0 / (1 + E))
    den = B0 - 2 * B0 / (1 + E)
    return (num / den) * _phase(x, t, alpha, upsilon, sigma, levy_value)


def psi_case5(x, t, H, B0, A, alpha, upsilon, sigma, levy_value):
    k = 1j * cmath.sqrt(H) / sqrt(2)
    E = A * cmath.exp(k * (x + 2 * alpha * t))
    num = (1j * cmath.sqrt(H) * B0 / sqrt(2)
           + 1j * cmath.sqrt(2 * H) * B0 / (1 + E) ** 2
           - 1j * cmath.sqrt(2 * H) * B0 / (1 + E))
    den = B0 - 2 * B0 / (1 + E)
    return (num / den) * _phase(x, t, alpha, upsilon, sigma, levy_value)


def psi_case6(x, t, H, B0, A, alpha, upsilon, sigma, levy_value):
    k = -1j * cmath.sqrt(2 * H)
    E = A * cmath.exp(k * (x + 2 * alpha * t))
    num = -1j * cmath.sqrt(H) * B0
    den = sqrt(2) * (B0 - 2 * B0 / (1 + E))
    return (num / den) * _phase(x, t, alpha, upsilon, sigma, levy_value)


def psi_case7(x, t, H, B0, A, alpha, upsilon, sigma, levy_value):
    k = -1j * cmath.sqrt(2 * H)
    E = A * cmath.exp(k * (x + 2 * alpha * t))
    num = 1j * cmath.sqrt(H) * B0 / sqrt(2) - 1j * cmath.sqrt(2 * H) * B0 / (1 + E)
    den = B0 - 2 * B0 / (1 + E)
    return (num / den) * _phase(x, t, alpha, upsilon, sigma, levy_value)


CLOSED_FORMS = {
    1: psi_case1,
    2: psi_case2,
    3: psi_case3,
    4: psi_case4,
    5: psi_case5,
    6: psi_case6,
    7: psi_case7,
}
