use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nondecreasing knot sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotVector<T>(pub(crate) Vec<T>);

impl<T: Real> KnotVector<T> {
    pub fn new(knots: Vec<T>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::invalid("knot vector needs at least two knots"));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::invalid("knot vector contains non-finite values"));
        }
        if let Some(i) = knots.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::invalid(format!(
                "knot vector decreases at index {}: {} > {}",
                i + 1,
                knots[i],
                knots[i + 1]
            )));
        }
        Ok(KnotVector(knots))
    }

    /// Clamped knot vector on `[start, end]` with the given interior knots.
    pub fn clamped(degree: usize, start: T, end: T, interior: &[T]) -> Result<Self> {
        let mut k = vec![start; degree + 1];
        k.extend_from_slice(interior);
        k.extend(std::iter::repeat(end).take(degree + 1));
        Self::new(k)
    }

    /// Clamped uniform knot vector on `[0, 1]` for `n_ctrl` control points.
    pub fn uniform(n_ctrl: usize, degree: usize) -> Result<Self> {
        if n_ctrl < degree + 1 {
            return Err(Error::invalid(format!(
                "{n_ctrl} control points cannot carry degree {degree}"
            )));
        }
        let spans = n_ctrl - degree;
        let interior: Vec<T> =
            (1..spans).map(|i| T::from_count(i) / T::from_count(spans)).collect();
        Self::clamped(degree, T::zero(), T::one(), &interior)
    }

    /// Clamped knot vector from parameter averaging, suitable for
    /// interpolating one point per parameter.
    pub fn averaged(params: &[T], degree: usize) -> Result<Self> {
        let n = params.len();
        if n < degree + 1 {
            return Err(Error::invalid(format!(
                "{n} parameters cannot carry degree {degree}"
            )));
        }
        let inv = T::one() / T::from_count(degree.max(1));
        let interior: Vec<T> = (1..n - degree)
            .map(|j| params[j..j + degree].iter().copied().sum::<T>() * inv)
            .collect();
        Self::clamped(degree, params[0], params[n - 1], &interior)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn first(&self) -> T {
        self.0[0]
    }

    pub fn last(&self) -> T {
        self.0[self.0.len() - 1]
    }

    /// Number of control points implied for a curve of `degree`.
    pub fn control_count(&self, degree: usize) -> usize {
        self.0.len().saturating_sub(degree + 1)
    }

    pub fn domain(&self, degree: usize) -> (T, T) {
        let n = self.control_count(degree);
        (self.0[degree], self.0[n])
    }

    /// Index `s` of the nonempty span `[k_s, k_{s+1})` containing `u`,
    /// restricted to the domain of a curve of `degree`. The domain end maps
    /// to the last nonempty span.
    pub fn find_span(&self, degree: usize, u: T) -> usize {
        let k = &self.0;
        let n = self.control_count(degree);
        if u >= k[n] {
            let mut s = n - 1;
            while s > degree && k[s] >= k[s + 1] {
                s -= 1;
            }
            return s;
        }
        if u <= k[degree] {
            let mut s = degree;
            while s + 1 < n && k[s + 1] <= u {
                s += 1;
            }
            return s;
        }
        let (mut lo, mut hi) = (degree, n);
        let mut mid = (lo + hi) / 2;
        while u < k[mid] || u >= k[mid + 1] {
            if u < k[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
            mid = (lo + hi) / 2;
        }
        mid
    }

    /// Exact multiplicity of the value `u`.
    pub fn multiplicity(&self, u: T) -> usize {
        self.0.iter().filter(|&&k| k == u).count()
    }

    /// Distinct knot values with their multiplicities, in order.
    pub fn distinct(&self) -> Vec<(T, usize)> {
        let mut out: Vec<(T, usize)> = Vec::new();
        for &k in &self.0 {
            match out.last_mut() {
                Some((v, m)) if *v == k => *m += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }

    /// Distinct knots strictly inside the domain of a curve of `degree`.
    pub fn interior_distinct(&self, degree: usize) -> Vec<(T, usize)> {
        let (a, b) = self.domain(degree);
        self.distinct().into_iter().filter(|(k, _)| *k > a && *k < b).collect()
    }

    pub fn is_clamped(&self, degree: usize) -> bool {
        let n = self.0.len();
        n >= 2 * (degree + 1)
            && self.0[..=degree].iter().all(|&k| k == self.0[0])
            && self.0[n - degree - 1..].iter().all(|&k| k == self.0[n - 1])
    }

    /// Applies the affine map sending `[from.0, from.1]` onto `[to.0, to.1]`.
    /// Knots equal to the source ends land exactly on the target ends.
    pub fn remapped(&self, from: (T, T), to: (T, T)) -> Self {
        let scale = (to.1 - to.0) / (from.1 - from.0);
        KnotVector(
            self.0
                .iter()
                .map(|&k| {
                    if k == from.0 {
                        to.0
                    } else if k == from.1 {
                        to.1
                    } else {
                        to.0 + (k - from.0) * scale
                    }
                })
                .collect(),
        )
    }

    /// Knots that must be inserted into `self` so that every distinct value of
    /// `target` reaches at least its multiplicity in `target`.
    pub fn missing_from(&self, target: &Self) -> Vec<T> {
        let mine = self.distinct();
        let mut out = Vec::new();
        for (v, m) in target.distinct() {
            let have = mine.iter().find(|(k, _)| *k == v).map_or(0, |(_, c)| *c);
            out.extend(std::iter::repeat(v).take(m.saturating_sub(have)));
        }
        out
    }

    /// Union of two knot vectors, keeping the larger multiplicity per value.
    pub fn merged(&self, other: &Self) -> Self {
        let a = self.distinct();
        let b = other.distinct();
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.len().max(other.len()));
        while i < a.len() || j < b.len() {
            let take = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                let r = a[i];
                i += 1;
                r
            } else if i >= a.len() || b[j].0 < a[i].0 {
                let r = b[j];
                j += 1;
                r
            } else {
                let r = (a[i].0, a[i].1.max(b[j].1));
                i += 1;
                j += 1;
                r
            };
            out.extend(std::iter::repeat(take.0).take(take.1));
        }
        KnotVector(out)
    }
}

impl<T> Index<usize> for KnotVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_decreasing() {
        assert!(KnotVector::new(vec![0.0, 1.0, 0.5]).is_err());
    }

    #[test]
    fn uniform_layout() {
        let k = KnotVector::<f64>::uniform(5, 3).unwrap();
        assert_eq!(k.as_slice(), &[0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0, 1.0]);
        assert!(k.is_clamped(3));
        assert_eq!(k.control_count(3), 5);
    }

    #[test]
    fn averaged_knots() {
        let k = KnotVector::averaged(&[0.0, 0.25, 0.5, 0.75, 1.0], 2).unwrap();
        assert_eq!(k.as_slice(), &[0.0, 0.0, 0.0, 0.375, 0.625, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn spans_at_ends_and_interior() {
        let k = KnotVector::new(vec![0.0, 0.0, 0.0, 0.5, 0.5, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(k.find_span(2, 0.0), 2);
        assert_eq!(k.find_span(2, 0.25), 2);
        assert_eq!(k.find_span(2, 0.5), 4);
        assert_eq!(k.find_span(2, 1.0), 4);
    }

    #[test]
    fn merge_keeps_max_multiplicity() {
        let a = KnotVector::new(vec![0.0, 0.0, 0.3, 0.3, 1.0, 1.0]).unwrap();
        let b = KnotVector::new(vec![0.0, 0.0, 0.3, 0.7, 1.0, 1.0]).unwrap();
        assert_eq!(a.merged(&b).as_slice(), &[0.0, 0.0, 0.3, 0.3, 0.7, 1.0, 1.0]);
        assert_eq!(a.missing_from(&a.merged(&b)), vec![0.7]);
    }
}
