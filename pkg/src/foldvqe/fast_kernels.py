"""Optional numba gate kernels; semantics identical to the numpy path.

Each kernel walks the flat amplitude array using bit masks (qubit q has
mask 1 << (n - 1 - q)), visiting each amplitude group exactly once.
Falls back silently when numba is unavailable or FOLDVQE_NO_NUMBA is set.
"""

from __future__ import annotations

import os

AVAILABLE = False

if not os.environ.get("FOLDVQE_NO_NUMBA"):
    try:
        from numba import njit

        AVAILABLE = True
    except ImportError:  # pragma: no cover - environment without numba
        pass

if AVAILABLE:

    @njit(cache=True)
    def single_rotation(amp, mask, m00, m01, m10, m11):
        for base in range(0, amp.size, 2 * mask):
            for i in range(base, base + mask):
                j = i + mask
                a0 = amp[i]
                a1 = amp[j]
                amp[i] = m00 * a0 + m01 * a1
                amp[j] = m10 * a0 + m11 * a1

    @njit(cache=True)
    def phase_pair(amp, mask, p0, p1):
        for base in range(0, amp.size, 2 * mask):
            for i in range(base, base + mask):
                amp[i] *= p0
                amp[i + mask] *= p1

    @njit(cache=True)
    def cnot(amp, cmask, tmask):
        for i in range(amp.size):
            if (i & cmask) != 0 and (i & tmask) == 0:
                j = i | tmask
                amp[i], amp[j] = amp[j], amp[i]

    @njit(cache=True)
    def cz(amp, cmask, tmask):
        both = cmask | tmask
        for i in range(amp.size):
            if (i & both) == both:
                amp[i] = -amp[i]

    @njit(cache=True)
    def rzz(amp, amask, bmask, phase, conj_phase):
        mlo = amask if amask < bmask else bmask
        mhi = bmask if amask < bmask else amask
        for base in range(0, amp.size, 2 * mhi):
            for mid in range(base, base + mhi, 2 * mlo):
                for i in range(mid, mid + mlo):
                    amp[i] *= phase
                    amp[i + mlo + mhi] *= phase
                    amp[i + mlo] *= conj_phase
                    amp[i + mhi] *= conj_phase

    @njit(cache=True)
    def ryz(amp, ymask, zmask, c, s):
        mlo = ymask if ymask < zmask else zmask
        mhi = zmask if ymask < zmask else ymask
        for base in range(0, amp.size, 2 * mhi):
            for mid in range(base, base + mhi, 2 * mlo):
                for i in range(mid, mid + mlo):
                    j = i | ymask  # Y-qubit flipped, Z-qubit bit 0
                    a0 = amp[i]
                    a1 = amp[j]
                    amp[i] = c * a0 - s * a1
                    amp[j] = s * a0 + c * a1
                    k = i | zmask
                    l = k | ymask
                    b0 = amp[k]
                    b1 = amp[l]
                    amp[k] = c * b0 + s * b1
                    amp[l] = -s * b0 + c * b1

    @njit(cache=True)
    def controlled_rx(amp, cmask, tmask, c, s):
        # control 0 block rotates by +t, control 1 block by -t
        mlo = cmask if cmask < tmask else tmask
        mhi = tmask if cmask < tmask else cmask
        for base in range(0, amp.size, 2 * mhi):
            for mid in range(base, base + mhi, 2 * mlo):
                for i in range(mid, mid + mlo):
                    j = i | tmask
                    a0 = amp[i]
                    a1 = amp[j]
                    amp[i] = c * a0 - 1j * s * a1
                    amp[j] = -1j * s * a0 + c * a1
                    k = i | cmask
                    l = k | tmask
                    b0 = amp[k]
                    b1 = amp[l]
                    amp[k] = c * b0 + 1j * s * b1
                    amp[l] = 1j * s * b0 + c * b1

    @njit(cache=True)
    def expectation(amp, table):
        acc = 0.0
        for i in range(amp.size):
            a = amp[i]
            acc += (a.real * a.real + a.imag * a.imag) * table[i]
        return acc
