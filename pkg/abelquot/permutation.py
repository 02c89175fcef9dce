"""Permutations of {0, ..., n-1}, finitely generated permutation groups and
the textual group file format.

Products are read left to right: ``p * q`` first applies ``p`` and then
``q``, so ``(p * q)(i) == q(p(i))``. Every orbit, chain and block computation
in the package uses this right action.
"""
import math
import re
from dataclasses import dataclass, field

from . import config
from .errors import DegreeMismatchError, GroupFormatError, InputError


class Permutation:
    """A bijection of {0, ..., n-1}, stored as its image tuple.

    Parameters
    ----------
    images : sequence of int
        ``images[i]`` is the image of point ``i``.
    check : bool
        Validate that ``images`` is a bijection. Internal callers that
        already know this pass False.

    Attributes
    ----------
    images : tuple of int
        The image of every point.
    degree : int
        Number of points acted on.

    """

    __slots__ = ("images", "_hash")

    def __init__(self, images, check=True):
        images = tuple(images)
        if check:
            n = len(images)
            if n < 1:
                raise InputError("A permutation needs degree at least 1")
            if sorted(images) != list(range(n)):
                raise InputError(
                    f"Images {images} are not a bijection of 0..{n - 1}"
                )
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", hash(images))

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, point):
        return self.images[point]

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __mul__(self, other):
        return permutation_product(self, other)

    def __invert__(self):
        return inverse(self)

    def __pow__(self, exponent):
        return power(self, exponent)

    def __repr__(self):
        return f"Permutation({format_cycles(self)})"

    def __reduce__(self):
        return (Permutation, (self.images, False))

    @property
    def is_identity(self):
        return all(i == image for i, image in enumerate(self.images))


def identity(degree):
    """Identity permutation of the given degree."""
    return Permutation(range(degree), check=False)


def permutation_product(p, q):
    """Composite that applies ``p`` first and then ``q``.

    Parameters
    ----------
    p, q : Permutation
        Factors of equal degree.

    Returns
    -------
    Permutation
        The map ``i -> q(p(i))``.

    """
    if p.degree != q.degree:
        raise DegreeMismatchError(
            f"Cannot compose degree {p.degree} with degree {q.degree}"
        )
    qi = q.images
    return Permutation([qi[i] for i in p.images], check=False)


def inverse(p):
    result = [0] * p.degree
    for i, image in enumerate(p.images):
        result[image] = i
    return Permutation(result, check=False)


def power(p, exponent):
    """``p`` raised to an integer power (negative powers allowed)."""
    if exponent < 0:
        return power(inverse(p), -exponent)
    result = identity(p.degree)
    base = p
    while exponent:
        if exponent & 1:
            result = result * base
        base = base * base
        exponent >>= 1
    return result


def conjugate(p, by):
    """The conjugate ``by^-1 * p * by``."""
    return inverse(by) * p * by


def commutator(a, b):
    """The commutator ``a^-1 * b^-1 * a * b``."""
    return inverse(a) * inverse(b) * a * b


def cycles(p):
    """Non-trivial cycles of ``p``, each starting at its smallest point."""
    seen = set()
    result = []
    for start in range(p.degree):
        if start in seen or p.images[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        j = p.images[start]
        while j != start:
            cycle.append(j)
            seen.add(j)
            j = p.images[j]
        result.append(tuple(cycle))
    return result


def cycle_type(p):
    """Sorted tuple of all cycle lengths, fixed points included."""
    lengths = [len(c) for c in cycles(p)]
    lengths.extend([1] * (p.degree - sum(lengths)))
    return tuple(sorted(lengths))


def order_of(p):
    """Order of ``p`` in the symmetric group."""
    return math.lcm(*(len(c) for c in cycles(p))) if not p.is_identity else 1


def is_even(p):
    return sum(len(c) - 1 for c in cycles(p)) % 2 == 0


def support(p):
    """Sorted list of points moved by ``p``."""
    return [i for i, image in enumerate(p.images) if image != i]


def restricted(p, points):
    """Action of ``p`` on an invariant point set, relabelled to 0..k-1.

    Parameters
    ----------
    p : Permutation
        Permutation mapping ``points`` onto itself.
    points : iterable of int
        The invariant set; its sorted order defines the relabelling.

    Returns
    -------
    Permutation
        Permutation of degree ``len(points)``.

    """
    points = sorted(points)
    local = {point: k for k, point in enumerate(points)}
    try:
        return Permutation(
            [local[p.images[point]] for point in points], check=False
        )
    except KeyError:
        raise InputError(
            f"Point set {points} is not invariant under {p}"
        ) from None


def from_cycles(degree, cycle_list):
    """Build a permutation from disjoint 0-based cycles."""
    images = list(range(degree))
    for cycle in cycle_list:
        for k, point in enumerate(cycle):
            images[point] = cycle[(k + 1) % len(cycle)]
    return Permutation(images)


def format_cycles(p):
    """Cycle notation with 1-based points, ``()`` for the identity."""
    parts = [
        "(" + ",".join(str(point + 1) for point in cycle) + ")"
        for cycle in cycles(p)
    ]
    return "".join(parts) if parts else "()"


@dataclass(frozen=True)
class GroupSpec:
    """A permutation group given by generators.

    Parameters
    ----------
    degree : int
        Number of points.
    generators : tuple of Permutation
        Non-empty tuple of generators, all of degree ``degree``. The
        identity may appear (it is how the trivial group is written).
    label : str
        Optional human-readable name.

    """

    degree: int
    generators: tuple
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.degree < 1:
            raise InputError("Group degree must be at least 1")
        if self.degree > config.MAX_DEGREE:
            raise InputError(
                f"Degree {self.degree} exceeds the degree cap "
                f"{config.MAX_DEGREE}"
            )
        if not self.generators:
            raise InputError("A group needs at least one generator")
        for g in self.generators:
            if g.degree != self.degree:
                raise DegreeMismatchError(
                    f"Generator {g} has degree {g.degree}, expected "
                    f"{self.degree}"
                )

    @classmethod
    def from_cycles(cls, degree, generator_cycles, label=""):
        """Convenience constructor taking 1-based cycle notation strings.

        Parameters
        ----------
        degree : int
            Number of points.
        generator_cycles : list of str
            Generators as written in group files, e.g. ``"(1,2,3)(4,5)"``.
        label : str
            Optional label.

        """
        generators = [
            _parse_generator(text, degree, None) for text in generator_cycles
        ]
        return cls(degree, tuple(generators), label)

    @classmethod
    def trivial(cls, degree, label=""):
        return cls(degree, (identity(degree),), label)

    @property
    def nontrivial_generators(self):
        return [g for g in self.generators if not g.is_identity]

    def with_label(self, label):
        return GroupSpec(self.degree, self.generators, label)


_CYCLE_RE = re.compile(r"\((\d+(?:,\d+)*)\)")
_GENERATOR_RE = re.compile(r"(?:\(\d+(?:,\d+)*\))+|\(\)")
_LABEL_PREFIX = "label:"


def _parse_generator(text, degree, line_number):
    # whitespace may separate cycles but never split one
    tokens = text.split()
    if not tokens or not all(_GENERATOR_RE.fullmatch(t) for t in tokens):
        raise GroupFormatError(f"Malformed cycle text {text!r}", line_number)
    text = "".join(tokens)
    images = list(range(degree))
    used = set()
    for match in _CYCLE_RE.finditer(text):
        points = [int(token) for token in match.group(1).split(",")]
        for point in points:
            if point < 1 or point > degree:
                raise GroupFormatError(
                    f"Point {point} is out of range 1..{degree}", line_number
                )
            if point in used:
                raise GroupFormatError(
                    f"Point {point} appears twice in {text!r}", line_number
                )
            used.add(point)
        for k, point in enumerate(points):
            images[point - 1] = points[(k + 1) % len(points)] - 1
    return Permutation(images, check=False)


def parse_group(text):
    """Parse the textual group file format.

    The format is a ``degree <n>`` line, then any number of ``# comment``
    lines, then one or more ``gen <cycles>`` lines with 1-based points.
    A ``# label: <text>`` comment sets the group label.

    Parameters
    ----------
    text : str
        Contents of a group file.

    Returns
    -------
    GroupSpec
        The group, with 0-based internal points.

    """
    degree = None
    label = ""
    generators = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith(_LABEL_PREFIX):
                label = comment[len(_LABEL_PREFIX):].strip()
            continue
        keyword, _, rest = line.partition(" ")
        if keyword == "degree":
            if degree is not None:
                raise GroupFormatError("Repeated degree header", line_number)
            try:
                degree = int(rest.strip())
            except ValueError:
                raise GroupFormatError(
                    f"Degree {rest.strip()!r} is not an integer", line_number
                ) from None
            if degree < 1:
                raise GroupFormatError("Degree must be positive", line_number)
        elif keyword == "gen":
            if degree is None:
                raise GroupFormatError(
                    "Missing degree header before generators", line_number
                )
            generators.append(_parse_generator(rest, degree, line_number))
        else:
            raise GroupFormatError(
                f"Unrecognised line {line!r}", line_number
            )
    if degree is None:
        raise GroupFormatError("Missing degree header")
    if not generators:
        raise GroupFormatError("No generators given")
    return GroupSpec(degree, tuple(generators), label)


def format_group(group):
    """Render a group in the group file format (inverse of parse_group)."""
    lines = [f"degree {group.degree}"]
    if group.label:
        lines.append(f"# {_LABEL_PREFIX} {group.label}")
    lines.extend(f"gen {format_cycles(g)}" for g in group.generators)
    return "\n".join(lines) + "\n"


def read_group_file(path):
    with open(path) as f:
        return parse_group(f.read())


def write_group_file(group, path):
    with open(path, "w") as f:
        f.write(format_group(group))
