use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::scalar::Real;

/// A point (or vector) with `D` coordinates.
///
/// One-dimensional points carry scalar-valued splines such as
/// reparametrization functions; three-dimensional points carry geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point<T, const D: usize>(pub [T; D]);

pub type Point3<T> = Point<T, 3>;
pub type Point1<T> = Point<T, 1>;

impl<T, const D: usize> From<[T; D]> for Point<T, D> {
    fn from(c: [T; D]) -> Self {
        Point(c)
    }
}

impl<T: Real, const D: usize> Default for Point<T, D> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real, const D: usize> Point<T, D> {
    pub fn zero() -> Self {
        Point([T::zero(); D])
    }

    pub fn coords(&self) -> &[T; D] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(T::zero(), |acc, (a, b)| acc + *a * *b)
    }

    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        (*self - *other).norm()
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    /// Returns `None` for vectors shorter than `eps`.
    pub fn normalized(&self, eps: T) -> Option<Self> {
        let n = self.norm();
        if n <= eps {
            None
        } else {
            Some(*self * (T::one() / n))
        }
    }

    pub fn lerp(&self, other: &Self, t: T) -> Self {
        *self * (T::one() - t) + *other * t
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        let mut out = *self;
        for c in out.0.iter_mut() {
            *c = f(*c);
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Converts every coordinate to another scalar type.
    pub fn cast<U: Real>(&self) -> Point<U, D> {
        let mut out = Point::<U, D>::zero();
        for (o, c) in out.0.iter_mut().zip(self.0.iter()) {
            *o = U::lit(c.as_f64());
        }
        out
    }
}

impl<T: Real> Point<T, 3> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Point([x, y, z])
    }

    pub fn x(&self) -> T {
        self.0[0]
    }

    pub fn y(&self) -> T {
        self.0[1]
    }

    pub fn z(&self) -> T {
        self.0[2]
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a, b, c] = self.0;
        let [d, e, f] = o.0;
        Point([b * f - c * e, c * d - a * f, a * e - b * d])
    }
}

impl<T: Real> Point<T, 1> {
    pub fn scalar(v: T) -> Self {
        Point([v])
    }

    pub fn value(&self) -> T {
        self.0[0]
    }
}

impl<T: Real, const D: usize> Add for Point<T, D> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<T: Real, const D: usize> AddAssign for Point<T, D> {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl<T: Real, const D: usize> Sub for Point<T, D> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl<T: Real, const D: usize> SubAssign for Point<T, D> {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

impl<T: Real, const D: usize> Mul<T> for Point<T, D> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.map(|c| c * s)
    }
}

impl<T: Real, const D: usize> Neg for Point<T, D> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c)
    }
}

impl<T, const D: usize> Index<usize> for Point<T, D> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T, const D: usize> IndexMut<usize> for Point<T, D> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox<T, const D: usize> {
    pub min: Point<T, D>,
    pub max: Point<T, D>,
}

impl<T: Real, const D: usize> BoundingBox<T, D> {
    /// Returns `None` for an empty point set.
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point<T, D>>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = BoundingBox { min: first, max: first };
        for p in it {
            bb.include(p);
        }
        Some(bb)
    }

    pub fn include(&mut self, p: &Point<T, D>) {
        for k in 0..D {
            self.min[k] = self.min[k].min(p[k]);
            self.max[k] = self.max[k].max(p[k]);
        }
    }

    pub fn merge(&self, other: &Self) -> Self {
        let mut out = *self;
        out.include(&other.min);
        out.include(&other.max);
        out
    }

    pub fn diagonal(&self) -> T {
        (self.max - self.min).norm()
    }

    pub fn contains(&self, p: &Point<T, D>, slack: T) -> bool {
        (0..D).all(|k| p[k] >= self.min[k] - slack && p[k] <= self.max[k] + slack)
    }

    pub fn intersects(&self, other: &Self, slack: T) -> bool {
        (0..D).all(|k| {
            self.min[k] <= other.max[k] + slack && other.min[k] <= self.max[k] + slack
        })
    }
}
