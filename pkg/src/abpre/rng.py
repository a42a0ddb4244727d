"""Injectable randomness sources.

No abpre operation draws ambient randomness: every key-generation,
encryption and re-encryption call takes one of these sources explicitly,
which is what makes transcripts reproducible and the seeded CLI mode
possible.
"""

import random
import secrets


class RandomSource:
    """Interface: integers uniform below a bound, plus raw bytes."""

    def below(self, bound: int) -> int:
        raise NotImplementedError

    def tokens(self, n: int) -> bytes:
        raise NotImplementedError

    def below_nonzero(self, bound: int) -> int:
        """Uniform over [1, bound); redraws on zero."""
        while True:
            v = self.below(bound)
            if v != 0:
                return v


class SystemRandom(RandomSource):
    """OS randomness; the default for anything that matters."""

    def below(self, bound):
        return secrets.randbelow(bound)

    def tokens(self, n):
        return secrets.token_bytes(n)


class SeededRandom(RandomSource):
    """PRNG seeded from an integer. Test and demo use only."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def below(self, bound):
        return self._rng.randrange(bound)

    def tokens(self, n):
        return self._rng.randbytes(n)


class TapeRandom(RandomSource):
    """Replays a fixed list of draws; used for worked transcripts.

    `below` pops the next value and `tokens` pops one value per byte, so a
    tape encodes a whole deterministic protocol run.
    """

    def __init__(self, values):
        self._values = list(values)
        self._pos = 0

    def _next(self):
        if self._pos >= len(self._values):
            raise IndexError("randomness tape exhausted")
        v = self._values[self._pos]
        self._pos += 1
        return v

    def below(self, bound):
        v = self._next()
        if not 0 <= v < bound:
            raise ValueError(f"tape value {v} out of range for bound {bound}")
        return v

    def tokens(self, n):
        return bytes(self._next() & 0xFF for _ in range(n))

    @property
    def remaining(self):
        return len(self._values) - self._pos
