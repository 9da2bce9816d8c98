"""Hot integer kernels for word arithmetic.

Words are int64 arrays of signed generator indices (``+i`` is generator ``i``,
``-i`` its inverse, ``i >= 1``).  Relator successor tables ``succ`` have shape
``(2, 2*n + 1)``: row 0 maps a letter (offset by ``n``) to the letter that
follows it in the cyclic relator, row 1 does the same for the inverse relator.
This only makes sense when every signed letter occurs exactly once in the
relator, which is the case for the standard surface relator.
"""

import numpy as np

from ._accel import njit


@njit
def _free_reduce_inplace(buf, n):
    top = 0
    for i in range(n):
        x = buf[i]
        if top > 0 and buf[top - 1] == -x:
            top -= 1
        else:
            buf[top] = x
            top += 1
    return top


@njit
def free_reduce_array(word):
    buf = word.copy()
    n = _free_reduce_inplace(buf, buf.shape[0])
    return buf[:n]


@njit
def _dehn_step(buf, n, succ, off, rlen):
    """One leftmost-longest replacement; returns the new length or -1."""
    for i in range(n):
        best_k = 0
        best_r = 0
        for r in range(2):
            k = 1
            cur = buf[i]
            while k < rlen and i + k < n:
                nxt = succ[r, cur + off]
                if buf[i + k] != nxt:
                    break
                cur = nxt
                k += 1
            if 2 * k > rlen and k > best_k:
                best_k = k
                best_r = r
        if best_k == 0:
            continue
        m = rlen - best_k
        comp = np.empty(m, dtype=buf.dtype)
        cur = buf[i + best_k - 1]
        for j in range(m):
            cur = succ[best_r, cur + off]
            comp[j] = cur
        # s * t = 1 with t = comp, so s is replaced by t^-1
        for j in range(m):
            buf[i + j] = -comp[m - 1 - j]
        shift = best_k - m
        for j in range(i + best_k, n):
            buf[j - shift] = buf[j]
        return n - shift
    return -1


@njit
def dehn_reduce_array(word, succ, rlen):
    """Dehn's algorithm: shorten until no subword exceeds half a relator."""
    off = (succ.shape[1] - 1) // 2
    buf = word.copy()
    n = _free_reduce_inplace(buf, buf.shape[0])
    while True:
        m = _dehn_step(buf, n, succ, off, rlen)
        if m < 0:
            break
        n = _free_reduce_inplace(buf, m)
    return buf[:n]


@njit
def dehn_trivial_batch(words, lengths, succ, rlen):
    out = np.zeros(words.shape[0], dtype=np.bool_)
    for row in range(words.shape[0]):
        w = words[row, : lengths[row]]
        out[row] = dehn_reduce_array(w, succ, rlen).shape[0] == 0
    return out


def enumerate_reduced(n_gens, length, dtype=np.int8):
    """All freely reduced words of exactly ``length`` letters, one per row."""
    letters = np.array([s * g for g in range(1, n_gens + 1) for s in (1, -1)], dtype=dtype)
    if length == 0:
        return np.zeros((1, 0), dtype=dtype)
    words = letters[:, None]
    for _ in range(length - 1):
        k = letters.shape[0]
        rep = np.repeat(words, k, axis=0)
        nxt = np.tile(letters, words.shape[0])
        keep = rep[:, -1] != -nxt
        words = np.concatenate([rep[keep], nxt[keep, None]], axis=1)
    return words


def abelianize_batch(words, n_gens):
    """Exponent-sum vectors for a padded batch (0 is padding)."""
    out = np.zeros((words.shape[0], n_gens), dtype=np.int64)
    for g in range(1, n_gens + 1):
        out[:, g - 1] = (words == g).sum(axis=1) - (words == -g).sum(axis=1)
    return out
