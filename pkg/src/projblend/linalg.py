"""Small fixed-size vector/matrix kernel: 4-vectors, 4x4 matrices, lerp.

Matrices are row-major and indexed ``m[row][col]``.  Everything here is
immutable and pure, so values can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SingularMatrixError",
    "Vec3",
    "NdcPoint",
    "Vec4",
    "Mat4",
    "lerp",
    "mat4_mul_vec4",
    "mat4_mul",
    "mat4_inverse",
    "max_abs_diff",
]

# |det| below this counts as singular.  Projection matrices over the valid
# parameter range sit far above it.
_DET_EPS = 1e-12


class SingularMatrixError(ValueError):
    """Raised when a matrix has no usable inverse."""


def lerp(x: float, y: float, z: float) -> float:
    """Linear interpolation x(1-z) + yz; exact at z = 0 and z = 1."""
    return x * (1.0 - z) + y * z


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, k: float) -> "Vec3":
        return Vec3(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def length(self) -> float:
        return math.sqrt(self.dot(self))

    def normalized(self) -> "Vec3":
        n = self.length()
        if n == 0.0:
            raise ValueError("cannot normalize a zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


# A Vec3 holding normalized device coordinates (components in [-1, 1] for
# points inside the view volume).
NdcPoint = Vec3


@dataclass(frozen=True)
class Vec4:
    x: float
    y: float
    z: float
    w: float

    @classmethod
    def from_vec3(cls, v: Vec3, w: float = 1.0) -> "Vec4":
        return cls(v.x, v.y, v.z, w)

    def xyz(self) -> Vec3:
        return Vec3(self.x, self.y, self.z)

    def __add__(self, other: "Vec4") -> "Vec4":
        return Vec4(self.x + other.x, self.y + other.y, self.z + other.z, self.w + other.w)

    def __sub__(self, other: "Vec4") -> "Vec4":
        return Vec4(self.x - other.x, self.y - other.y, self.z - other.z, self.w - other.w)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.z, self.w)


@dataclass(frozen=True)
class Mat4:
    """4x4 matrix stored as a tuple of four row tuples; ``m[row][col]``."""

    rows: tuple[tuple[float, float, float, float], ...]

    def __getitem__(self, row: int) -> tuple[float, float, float, float]:
        return self.rows[row]

    @classmethod
    def from_rows(cls, rows) -> "Mat4":
        out = tuple(tuple(float(v) for v in row) for row in rows)
        if len(out) != 4 or any(len(r) != 4 for r in out):
            raise ValueError("Mat4 needs exactly 4 rows of 4 values")
        return cls(out)

    @classmethod
    def identity(cls) -> "Mat4":
        return cls.from_rows(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        )

    @classmethod
    def diagonal(cls, a: float, b: float, c: float, d: float) -> "Mat4":
        return cls.from_rows(
            [[a, 0, 0, 0], [0, b, 0, 0], [0, 0, c, 0], [0, 0, 0, d]]
        )


def mat4_mul_vec4(m: Mat4, v: Vec4) -> Vec4:
    t = v.as_tuple()
    out = []
    for r in range(4):
        row = m.rows[r]
        out.append(row[0] * t[0] + row[1] * t[1] + row[2] * t[2] + row[3] * t[3])
    return Vec4(out[0], out[1], out[2], out[3])


def mat4_mul(a: Mat4, b: Mat4) -> Mat4:
    rows = []
    for r in range(4):
        ar = a.rows[r]
        rows.append(
            tuple(
                ar[0] * b.rows[0][c] + ar[1] * b.rows[1][c] + ar[2] * b.rows[2][c] + ar[3] * b.rows[3][c]
                for c in range(4)
            )
        )
    return Mat4(tuple(rows))


def mat4_inverse(m: Mat4) -> Mat4:
    """Invert via Gauss-Jordan elimination with partial pivoting.

    Raises SingularMatrixError when |det| < 1e-12 (the determinant is the
    signed product of the pivots).
    """
    a = [list(row) for row in m.rows]
    b = [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]
    det = 1.0
    for col in range(4):
        piv = max(range(col, 4), key=lambda r: abs(a[r][col]))
        if a[piv][col] == 0.0:
            raise SingularMatrixError("matrix is singular (zero pivot column)")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            det = -det
        p = a[col][col]
        det *= p
        inv_p = 1.0 / p
        a[col] = [v * inv_p for v in a[col]]
        b[col] = [v * inv_p for v in b[col]]
        for r in range(4):
            if r != col and a[r][col] != 0.0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
                b[r] = [v - f * w for v, w in zip(b[r], b[col])]
    # Written with `not >=` so a NaN determinant also lands here.
    if not (abs(det) >= _DET_EPS):
        raise SingularMatrixError(f"matrix is numerically singular (|det| = {abs(det):.3e})")
    return Mat4.from_rows(b)


def max_abs_diff(a: Mat4, b: Mat4) -> float:
    """Largest entry-wise absolute difference between two matrices."""
    return max(
        abs(a.rows[r][c] - b.rows[r][c]) for r in range(4) for c in range(4)
    )
