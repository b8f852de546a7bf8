"""Exploration steps and traces.

A trace is the canonical serialization of a rigid quadrangulation (and,
given the base length, of a colorful one): the sequence of G/R/L steps of
the row-by-row exploration, read depth-first.  Frontier bookkeeping tracks
the ordered list of open-side sizes; a step consumes the first entry and
pushes the sizes of the sides it creates, first-created first.
"""

from .errors import FrontierMismatch, IncompleteTrace

UP = "u"
DOWN = "d"


class Step:
    """One exploration step: G(left, right) or R(word) or L(word).

    For a G step on a side of size p, ``left + right == p - 1``; ``right``
    is the size of the first-created side.  Words are strings over ``u``/``d``;
    ``d`` letters feed the small (strip-surrounded) side, ``u`` letters the
    large one.
    """

    __slots__ = ("kind", "left", "right", "word")

    def __init__(self, kind, left=0, right=0, word=""):
        if kind == "G":
            if left < 0 or right < 0:
                raise ValueError("negative G side size")
            word = ""
        elif kind in ("R", "L"):
            if any(c not in (UP, DOWN) for c in word):
                raise ValueError(f"bad word {word!r}")
            left = right = 0
        else:
            raise ValueError(f"unknown step kind {kind!r}")
        self.kind = kind
        self.left = left
        self.right = right
        self.word = word

    @property
    def n_up(self):
        return self.word.count(UP)

    @property
    def n_down(self):
        return self.word.count(DOWN)

    def created_sizes(self, p):
        """Sizes pushed onto the frontier (first-created first) when applied
        to a side of size ``p``; zero entries are dropped by the caller."""
        if self.kind == "G":
            if self.left + self.right != p - 1:
                raise FrontierMismatch(-1, f"G({self.left},{self.right}) on side {p}")
            return (self.right, self.left)
        k, l = self.n_down, self.n_up
        if self.kind == "R":
            return (k, p + l)
        return (p + l, k)

    def as_tuple(self):
        if self.kind == "G":
            return ("G", self.left, self.right)
        return (self.kind, self.word)

    def __eq__(self, other):
        return isinstance(other, Step) and self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        if self.kind == "G":
            return f"G({self.left},{self.right})"
        return f"{self.kind}({self.word})"


def G(left, right):
    return Step("G", left=left, right=right)


def R(word=""):
    return Step("R", word=word)


def L(word=""):
    return Step("L", word=word)


class Trace:
    """A base length plus a step sequence."""

    __slots__ = ("p", "steps")

    def __init__(self, p, steps):
        if p < 1:
            raise ValueError("base length must be >= 1")
        self.p = p
        self.steps = list(steps)

    def frontier_run(self, require_complete=True):
        """Simulate the frontier; return the list of sizes after each step.

        Raises :class:`FrontierMismatch` on an inconsistent step and
        :class:`IncompleteTrace` if sides remain (when required).
        """
        sizes = [self.p]
        history = []
        for i, step in enumerate(self.steps):
            if not sizes:
                raise FrontierMismatch(i, "no open side left")
            s = sizes.pop(0)
            try:
                created = step.created_sizes(s)
            except FrontierMismatch as exc:
                raise FrontierMismatch(i, str(exc)) from None
            sizes[0:0] = [c for c in created if c > 0]
            history.append(tuple(sizes))
        if require_complete and sizes:
            raise IncompleteTrace(f"{len(sizes)} open sides remain")
        return history

    def is_complete(self):
        try:
            self.frontier_run()
        except (FrontierMismatch, IncompleteTrace):
            return False
        return True

    @property
    def weight(self):
        """The t-exponent of the object: number of steps plus one."""
        return len(self.steps) + 1

    def as_tuple(self):
        return (self.p, tuple(s.as_tuple() for s in self.steps))

    def __eq__(self, other):
        return isinstance(other, Trace) and self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return f"Trace(p={self.p}, {self.steps})"

    # -- text format: "p=2; G(1,0) R(ud) L()" ------------------------------------

    def to_text(self):
        parts = []
        for s in self.steps:
            if s.kind == "G":
                parts.append(f"G({s.left},{s.right})")
            else:
                parts.append(f"{s.kind}({s.word})")
        return f"p={self.p}; " + " ".join(parts)

    @classmethod
    def from_text(cls, text):
        head, _, rest = text.partition(";")
        head = head.strip()
        if not head.startswith("p="):
            raise ValueError(f"trace text must start with 'p=': {text!r}")
        p = int(head[2:])
        steps = []
        for tok in rest.split():
            kind, _, arg = tok.partition("(")
            if not arg.endswith(")"):
                raise ValueError(f"bad step token {tok!r}")
            arg = arg[:-1]
            if kind == "G":
                a, b = arg.split(",")
                steps.append(G(int(a), int(b)))
            elif kind in ("R", "L"):
                steps.append(Step(kind, word=arg))
            else:
                raise ValueError(f"bad step token {tok!r}")
        return cls(p, steps)
