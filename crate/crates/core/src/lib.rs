//! Non-obtuse triangulation of planar straight-line graphs with few Steiner
//! points.
//!
//! A constrained Delaunay triangulation is maintained and repeatedly edited
//! by inserting, relocating or merging Steiner points. Each round scores
//! candidate edits with a cost that weighs Steiner points against obtuse
//! triangles, optionally looking a few moves ahead, and keeps the best.
//! The geometry kernel is generic over the scalar type; everything that
//! persists coordinates uses exact rationals.

pub mod actions;
pub mod cdt;
pub mod error;
pub mod geom;
pub mod io;
pub mod merge;
pub mod primitives;
pub mod search;

pub use error::{Error, Result};

/// Exact rational scalar used for every persisted coordinate.
pub type Rational = num_rational::BigRational;
/// Exact point.
pub type Point = geom::Point<Rational>;
/// Floating-point point, used for numeric candidate search and rendering.
pub type PointF64 = geom::Point<f64>;
pub type Segment = geom::Segment<Rational>;

/// Integer point shorthand.
pub fn pt(x: i64, y: i64) -> Point {
    geom::Point::new(geom::rational::from_int(x), geom::rational::from_int(y))
}

/// Rational point shorthand from `(numerator, denominator)` pairs.
pub fn ptq(x: (i64, i64), y: (i64, i64)) -> Point {
    use num_bigint::BigInt;
    geom::Point::new(
        Rational::new(BigInt::from(x.0), BigInt::from(x.1)),
        Rational::new(BigInt::from(y.0), BigInt::from(y.1)),
    )
}
