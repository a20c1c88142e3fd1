"""Galois field GF(2^m) arithmetic via exp/log tables."""


class GaloisField:
    """GF(2^m) generated from a primitive polynomial.

    The default is GF(256) with polynomial 0x11D (x^8+x^4+x^3+x^2+1), the
    field underlying QR code Reed-Solomon blocks.
    """

    def __init__(self, prim_poly: int = 0x11D, order: int = 256):
        if order & (order - 1):
            raise ValueError("order must be a power of two")
        self.order = order
        self.prim_poly = prim_poly
        n = order - 1
        # exp doubled so mul never needs an explicit modulo
        self.exp = [0] * (2 * n)
        self.log = [0] * order
        x = 1
        for i in range(n):
            self.exp[i] = x
            self.log[x] = i
            x <<= 1
            if x & order:
                x ^= prim_poly
        if x != 1:
            raise ValueError("polynomial 0x%X is not primitive over GF(%d)" % (prim_poly, order))
        for i in range(n, 2 * n):
            self.exp[i] = self.exp[i - n]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF")
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF")
        return self.exp[self.order - 1 - self.log[a]]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 0
        return self.exp[(self.log[a] * n) % (self.order - 1)]

    # -- polynomial helpers (coefficient lists, highest degree first) --

    def poly_mul(self, p, q):
        out = [0] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            if a == 0:
                continue
            for j, b in enumerate(q):
                out[i + j] ^= self.mul(a, b)
        return out

    def poly_eval(self, p, x):
        acc = 0
        for c in p:
            acc = self.mul(acc, x) ^ c
        return acc


GF256 = GaloisField()
# small field used by the test-suite oracles (RS over GF(16), x^4+x+1)
GF16 = GaloisField(0x13, 16)
