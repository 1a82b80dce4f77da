//! Exact rationals and small dense linear algebra over them.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

/// Reduced fraction with positive denominator. Arithmetic overflow panics
/// (overflow checks are enabled in every build profile of this workspace).
pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `"n"` for integers, `"p/q"` otherwise.
pub fn render(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A point of `Q^d`. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn from_ints(v: &[i64]) -> Self {
        RationalVector(v.iter().map(|&x| int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Ratio::is_integer)
    }

    /// Integer coordinates, if every entry is an integer.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn dot_int(&self, a: &[i64]) -> Rational {
        self.0
            .iter()
            .zip(a)
            .fold(Rational::zero(), |acc, (x, &c)| acc + x * c)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, q) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", render(q))?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rendered: Vec<String> = self.0.iter().map(render).collect();
        rendered.serialize(serializer)
    }
}

/// Unique solution of `M x = rhs`, where `M` has `rows.len()` equations in
/// `rows[0].len()` unknowns. `None` when the system is inconsistent or its
/// rank is below the number of unknowns.
pub fn solve_unique(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(*b);
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let p = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col];
                let pivot = m[pivot_row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot).skip(col) {
                    *x -= factor * p;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| m[i][n]).collect())
}

/// Unique solution of the square integer system `M x = rhs` by
/// fraction-free (Bareiss) elimination; `None` when `M` is singular.
/// Intermediate values are bounded by minors of `M`; overflow panics.
pub fn solve_integer_square(rows: &[&[i64]], rhs: &[i64]) -> Option<Vec<Rational>> {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            debug_assert_eq!(r.len(), n);
            r.iter()
                .map(|&x| i128::from(x))
                .chain([i128::from(b)])
                .collect()
        })
        .collect();
    let mut prev = 1i128;
    for k in 0..n {
        let p = (k..n).find(|&r| m[r][k] != 0)?;
        m.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let num = (m[i][j].checked_mul(m[k][k]))
                    .and_then(|x| x.checked_sub(m[i][k].checked_mul(m[k][j])?))
                    .expect("overflow in exact elimination");
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    // back substitution over the rationals
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(narrow(m[i][n]));
        for j in i + 1..n {
            acc -= x[j] * narrow(m[i][j]);
        }
        x[i] = acc / narrow(m[i][i]);
    }
    Some(x)
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("overflow in exact elimination")
}

/// Rank of a set of vectors.
pub fn rank_of(vectors: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = vectors.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            if !m[r][col].is_zero() {
                let factor = m[r][col] / m[rank][col];
                let pivot = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot).skip(col) {
                    *x -= factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the affine hull; `None` for an empty set.
pub fn affine_dimension(points: &[RationalVector]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.0.iter().zip(&first.0).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank_of(&diffs))
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_forms() {
        assert_eq!(render(&Rational::new(4, 2)), "2");
        assert_eq!(render(&Rational::new(-3, 6)), "-1/2");
        assert_eq!(
            RationalVector(vec![int(2), Rational::new(2, 3)]).to_string(),
            "(2,2/3)"
        );
    }

    #[test]
    fn solve_square_and_overdetermined() {
        let rows = vec![vec![int(1), int(1)], vec![int(0), int(1)]];
        assert_eq!(
            solve_unique(&rows, &[int(3), int(2)]),
            Some(vec![int(1), int(2)])
        );

        // singular
        let rows = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(solve_unique(&rows, &[int(1), int(2)]), None);

        // 3 equations, 1 unknown, consistent
        let rows = vec![vec![int(2)], vec![int(0)], vec![int(4)]];
        assert_eq!(
            solve_unique(&rows, &[int(1), int(0), int(2)]),
            Some(vec![Rational::new(1, 2)])
        );
        assert_eq!(solve_unique(&rows, &[int(1), int(1), int(2)]), None);
    }

    #[test]
    fn integer_square_solver_matches_rational_route() {
        let a: [&[i64]; 3] = [&[1, 1, 0], &[0, 1, 1], &[1, 1, 1]];
        let b = [3, 3, 4];
        let rows: Vec<Vec<Rational>> = a
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        let rhs: Vec<Rational> = b.iter().map(|&x| int(x)).collect();
        assert_eq!(solve_integer_square(&a, &b), solve_unique(&rows, &rhs));
        assert_eq!(
            solve_integer_square(&a, &b),
            Some(vec![int(1), int(2), int(1)])
        );
        let half: [&[i64]; 2] = [&[2, 2], &[0, -1]];
        assert_eq!(
            solve_integer_square(&half, &[3, 0]),
            Some(vec![Rational::new(3, 2), int(0)])
        );
        let singular: [&[i64]; 2] = [&[1, 2], &[2, 4]];
        assert_eq!(solve_integer_square(&singular, &[1, 1]), None);
    }

    #[test]
    fn dimensions() {
        let pts = [
            RationalVector::from_ints(&[0, 0, 0]),
            RationalVector::from_ints(&[1, 0, 0]),
            RationalVector::from_ints(&[2, 0, 0]),
            RationalVector::from_ints(&[0, 1, 0]),
        ];
        assert_eq!(affine_dimension(&pts), Some(2));
        assert_eq!(affine_dimension(&pts[..1]), Some(0));
        assert_eq!(affine_dimension(&[]), None);
    }
}
