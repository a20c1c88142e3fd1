"""Reed-Solomon encoding and syndrome decoding (Berlekamp-Massey + Chien/Forney)."""

from functools import lru_cache

from .errors import UncorrectableError
from .galois import GF256, GaloisField


@lru_cache(maxsize=None)
def _generator_poly(gf: GaloisField, ec_len: int):
    # prod_{i=0..ec_len-1} (x - alpha^i), highest degree first
    g = [1]
    for i in range(ec_len):
        g = gf.poly_mul(g, [1, gf.exp[i]])
    return tuple(g)


def rs_encode(data, ec_len: int, gf: GaloisField = GF256) -> list:
    """Return ec_len parity symbols for the message ``data``.

    The concatenated frame data+parity is a codeword: all syndromes vanish.
    """
    if ec_len < 1:
        raise ValueError("ec_len must be >= 1")
    if len(data) == 0:
        raise ValueError("data must be non-empty")
    gen = _generator_poly(gf, ec_len)
    rem = list(data) + [0] * ec_len
    for i in range(len(data)):
        lead = rem[i]
        if lead == 0:
            continue
        for j in range(1, len(gen)):
            rem[i + j] ^= gf.mul(gen[j], lead)
    return rem[len(data):]


def syndromes(frame, ec_len: int, gf: GaloisField = GF256) -> list:
    return [gf.poly_eval(frame, gf.exp[i]) for i in range(ec_len)]


def _berlekamp_massey(synd, gf):
    # returns the error locator polynomial, lowest degree first
    c = [1]
    b = [1]
    l = 0
    m = 1
    bb = 1
    for n in range(len(synd)):
        d = synd[n]
        for i in range(1, l + 1):
            if i < len(c):
                d ^= gf.mul(c[i], synd[n - i])
        if d == 0:
            m += 1
        elif 2 * l <= n:
            t = c[:]
            scale = gf.div(d, bb)
            c = c + [0] * max(0, len(b) + m - len(c))
            for i in range(len(b)):
                c[i + m] ^= gf.mul(scale, b[i])
            l = n + 1 - l
            b = t
            bb = d
            m = 1
        else:
            scale = gf.div(d, bb)
            c = c + [0] * max(0, len(b) + m - len(c))
            for i in range(len(b)):
                c[i + m] ^= gf.mul(scale, b[i])
            m += 1
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def rs_decode(frame, ec_len: int, gf: GaloisField = GF256):
    """Correct up to ec_len//2 symbol errors in ``frame`` (message + parity).

    Returns (payload, corrected_count). Raises UncorrectableError when the
    locator degree exceeds capability, Chien search does not account for all
    roots, or the repaired frame still has nonzero syndromes.
    """
    n = len(frame)
    msg = list(frame)
    synd = syndromes(msg, ec_len, gf)
    if max(synd) == 0:
        return msg[:-ec_len], 0

    sigma = _berlekamp_massey(synd, gf)
    n_errors = len(sigma) - 1
    if n_errors == 0 or n_errors > ec_len // 2:
        raise UncorrectableError("error count exceeds correction capability")

    # Chien search over the shortened length: position p has locator
    # X_p = alpha^(n-1-p); p is an error position iff sigma(X_p^-1) == 0
    sigma_desc = sigma[::-1]
    span = gf.order - 1
    positions = [p for p in range(n)
                 if gf.poly_eval(sigma_desc, gf.inv(gf.exp[(n - 1 - p) % span])) == 0]
    if len(positions) != n_errors:
        raise UncorrectableError("error locator roots unaccounted for")

    # Forney: omega(x) = S(x)*sigma(x) mod x^ec_len  (descending order below)
    omega = gf.poly_mul(synd[::-1], sigma_desc)[-ec_len:]
    deg = len(sigma) - 1
    deriv = [sigma_desc[i] if (deg - i) % 2 == 1 else 0 for i in range(deg)] or [0]
    for p in positions:
        x_i = gf.exp[n - 1 - p]
        x_inv = gf.inv(x_i)
        denom = gf.poly_eval(deriv, x_inv)
        if denom == 0:
            raise UncorrectableError("Forney derivative vanished")
        magnitude = gf.mul(x_i, gf.div(gf.poly_eval(omega, x_inv), denom))
        msg[p] ^= magnitude

    if max(syndromes(msg, ec_len, gf)) != 0:
        raise UncorrectableError("residual syndromes after correction")
    return msg[:-ec_len], len(positions)
