//! The Desarguesian plane PG(2,q) over a [`Field`], with the orthogonal
//! polarity given by the identity Gram matrix.
//!
//! Points and lines are normalized homogeneous triples whose first nonzero
//! coordinate is 1. Points are ordered lexicographically by coordinate index,
//! which fixes vertex numbering for every graph built on the plane:
//!
//! ```text
//! (0,0,1) < (0,1,a) < (1,a,b)
//! ```

use std::fmt;

use thiserror::Error;

use crate::galois::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("coordinates belong to GF({found}), plane is over GF({expected})")]
    FieldMismatch { expected: u32, found: u32 },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("coordinate {0} out of range")]
    CoordinateOutOfRange(u32),
}

/// A normalized point of PG(2,q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [u32; 3],
    q: u32,
}

/// A normalized line of PG(2,q), in line coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    coords: [u32; 3],
    q: u32,
}

impl ProjPoint {
    pub fn coords(&self) -> [u32; 3] {
        self.coords
    }
}

impl ProjLine {
    pub fn coords(&self) -> [u32; 3] {
        self.coords
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coords;
        write!(f, "({a},{b},{c})")
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coords;
        write!(f, "[{a},{b},{c}]")
    }
}

/// PG(2,q) with its canonical point list.
#[derive(Debug, Clone)]
pub struct Plane {
    field: Field,
    points: Vec<ProjPoint>,
}

impl Plane {
    pub fn new(field: Field) -> Self {
        let q = field.order();
        let mut points = Vec::with_capacity(point_count(q));
        points.push(ProjPoint {
            coords: [0, 0, 1],
            q,
        });
        for a in 0..q {
            points.push(ProjPoint {
                coords: [0, 1, a],
                q,
            });
        }
        for a in 0..q {
            for b in 0..q {
                points.push(ProjPoint {
                    coords: [1, a, b],
                    q,
                });
            }
        }
        Plane { field, points }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// All `q^2+q+1` points in canonical order.
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    /// All lines, in the same canonical order as points.
    pub fn lines(&self) -> impl Iterator<Item = ProjLine> + '_ {
        self.points.iter().map(|p| ProjLine {
            coords: p.coords,
            q: p.q,
        })
    }

    /// Position of a point in [`Plane::points`].
    pub fn index_of(&self, p: &ProjPoint) -> usize {
        let q = self.order() as usize;
        match p.coords {
            [0, 0, _] => 0,
            [0, _, a] => 1 + a as usize,
            [_, a, b] => 1 + q + a as usize * q + b as usize,
        }
    }

    fn normalize(&self, mut v: [u32; 3]) -> Result<[u32; 3], ProjectiveError> {
        let q = self.order();
        if let Some(&bad) = v.iter().find(|&&c| c >= q) {
            return Err(ProjectiveError::CoordinateOutOfRange(bad));
        }
        let lead = *v
            .iter()
            .find(|&&c| c != 0)
            .ok_or(ProjectiveError::ZeroVector)?;
        let scale = self.field.inv_idx(lead).expect("lead is nonzero");
        for c in v.iter_mut() {
            *c = self.field.mul_idx(*c, scale);
        }
        Ok(v)
    }

    /// Normalizes an arbitrary nonzero triple of element indices into a point.
    pub fn point(&self, coords: [u32; 3]) -> Result<ProjPoint, ProjectiveError> {
        Ok(ProjPoint {
            coords: self.normalize(coords)?,
            q: self.order(),
        })
    }

    pub fn line(&self, coords: [u32; 3]) -> Result<ProjLine, ProjectiveError> {
        Ok(ProjLine {
            coords: self.normalize(coords)?,
            q: self.order(),
        })
    }

    fn check(&self, q: u32) -> Result<(), ProjectiveError> {
        if q == self.order() {
            Ok(())
        } else {
            Err(ProjectiveError::FieldMismatch {
                expected: self.order(),
                found: q,
            })
        }
    }

    fn dot(&self, a: [u32; 3], b: [u32; 3]) -> u32 {
        let f = &self.field;
        let s = f.add_idx(f.mul_idx(a[0], b[0]), f.mul_idx(a[1], b[1]));
        f.add_idx(s, f.mul_idx(a[2], b[2]))
    }

    pub fn incident(&self, p: &ProjPoint, l: &ProjLine) -> Result<bool, ProjectiveError> {
        self.check(p.q)?;
        self.check(l.q)?;
        Ok(self.dot(p.coords, l.coords) == 0)
    }

    /// Image of a point under the polarity.
    pub fn polar(&self, p: &ProjPoint) -> ProjLine {
        ProjLine {
            coords: p.coords,
            q: p.q,
        }
    }

    /// Image of a line under the polarity.
    pub fn pole(&self, l: &ProjLine) -> ProjPoint {
        ProjPoint {
            coords: l.coords,
            q: l.q,
        }
    }

    pub fn is_absolute(&self, p: &ProjPoint) -> bool {
        self.dot(p.coords, p.coords) == 0
    }

    /// Points lying on their own polar line, in canonical order.
    pub fn absolute_points(&self) -> Vec<ProjPoint> {
        self.points
            .iter()
            .filter(|p| self.is_absolute(p))
            .copied()
            .collect()
    }

    /// Points on `l`, in canonical order.
    pub fn points_on(&self, l: &ProjLine) -> Vec<ProjPoint> {
        self.points
            .iter()
            .filter(|p| self.dot(p.coords, l.coords) == 0)
            .copied()
            .collect()
    }

    /// The unique line through two distinct points (their cross product).
    pub fn join(&self, a: &ProjPoint, b: &ProjPoint) -> Result<ProjLine, ProjectiveError> {
        self.check(a.q)?;
        self.check(b.q)?;
        let f = &self.field;
        let (x, y) = (a.coords, b.coords);
        let minor = |i: usize, j: usize| f.sub_idx(f.mul_idx(x[i], y[j]), f.mul_idx(x[j], y[i]));
        self.line([minor(1, 2), minor(2, 0), minor(0, 1)])
    }
}

pub fn point_count(q: u32) -> usize {
    let q = q as usize;
    q * q + q + 1
}
