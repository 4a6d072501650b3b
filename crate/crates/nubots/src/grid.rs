//! Geometry of the two-dimensional triangular grid.
//!
//! Positions are stored as `(x, y)` integer pairs. The third axis `w` runs
//! through the origin with unit vector `(-1, 1)`, so every point has six
//! neighbours: `±x`, `±y`, `±w`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A point on the triangular grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: i32,
    pub y: i32,
}

impl GridPoint {
    pub const ORIGIN: GridPoint = GridPoint { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        GridPoint { x, y }
    }

    /// The six neighbouring grid points.
    pub fn neighbors(self) -> [GridPoint; 6] {
        let mut out = [GridPoint::ORIGIN; 6];
        for (i, d) in Direction::ALL.iter().enumerate() {
            out[i] = self + *d;
        }
        out
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add<Direction> for GridPoint {
    type Output = GridPoint;
    fn add(self, d: Direction) -> GridPoint {
        let (dx, dy) = d.delta();
        GridPoint::new(self.x + dx, self.y + dy)
    }
}

impl Sub<Direction> for GridPoint {
    type Output = GridPoint;
    fn sub(self, d: Direction) -> GridPoint {
        self + (-d)
    }
}

/// One of the six axial unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `(1, 0)`
    PlusX,
    /// `(-1, 0)`
    MinusX,
    /// `(0, 1)`
    PlusY,
    /// `(0, -1)`
    MinusY,
    /// `(-1, 1)`
    PlusW,
    /// `(1, -1)`
    MinusW,
}

pub use Direction::{MinusW, MinusX, MinusY, PlusW, PlusX, PlusY};

impl Direction {
    pub const ALL: [Direction; 6] = [PlusX, MinusX, PlusY, MinusY, PlusW, MinusW];

    pub const fn delta(self) -> (i32, i32) {
        match self {
            PlusX => (1, 0),
            MinusX => (-1, 0),
            PlusY => (0, 1),
            MinusY => (0, -1),
            PlusW => (-1, 1),
            MinusW => (1, -1),
        }
    }

    pub fn from_delta(dx: i32, dy: i32) -> Option<Direction> {
        Direction::ALL
            .into_iter()
            .find(|d| d.delta() == (dx, dy))
    }

    /// The two directions at triangular distance 1, i.e. the legal movement
    /// targets `u'` for a movement rule with orientation `u`.
    pub fn movement_targets(self) -> [Direction; 2] {
        let mut out = [self; 2];
        let mut n = 0;
        for d in Direction::ALL {
            if d != self && tri_distance(GridPoint::ORIGIN + self, GridPoint::ORIGIN + d) == 1 {
                out[n] = d;
                n += 1;
            }
        }
        debug_assert_eq!(n, 2);
        out
    }

    /// Rotate counter-clockwise by `steps` sixths of a full turn.
    /// The rotation order is `+x -> +y -> +w -> -x -> -y -> -w -> +x`.
    pub fn rotate(self, steps: u8) -> Direction {
        const CYCLE: [Direction; 6] = [PlusX, PlusY, PlusW, MinusX, MinusY, MinusW];
        let i = CYCLE.iter().position(|d| *d == self).unwrap();
        CYCLE[(i + steps as usize) % 6]
    }

    pub fn name(self) -> &'static str {
        match self {
            PlusX => "+x",
            MinusX => "-x",
            PlusY => "+y",
            MinusY => "-y",
            PlusW => "+w",
            MinusW => "-w",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.name() == s)
    }
}

impl Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        match self {
            PlusX => MinusX,
            MinusX => PlusX,
            PlusY => MinusY,
            MinusY => PlusY,
            PlusW => MinusW,
            MinusW => PlusW,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rotate a point counter-clockwise about the origin by `steps` sixths of a
/// full turn, consistently with [`Direction::rotate`].
pub fn rotate_point(p: GridPoint, steps: u8) -> GridPoint {
    let mut p = p;
    for _ in 0..(steps % 6) {
        // One 60-degree step maps (x, y) to (-y, x + y): +x -> +y, +y -> +w.
        p = GridPoint::new(-p.y, p.x + p.y);
    }
    p
}

/// Shortest-path length from `a` to `b` using steps from the six directions.
pub fn tri_distance(a: GridPoint, b: GridPoint) -> u32 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    if (dx >= 0) == (dy >= 0) {
        dx.unsigned_abs() + dy.unsigned_abs()
    } else {
        dx.unsigned_abs().max(dy.unsigned_abs())
    }
}

/// Translate every point of a set by one unit step.
pub fn translate<I: IntoIterator<Item = GridPoint>>(points: I, v: Direction) -> Vec<GridPoint> {
    points.into_iter().map(|p| p + v).collect()
}

/// Axis-aligned minimal bounding rectangle, in grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingRect {
    pub width: u32,
    pub height: u32,
}

impl BoundingRect {
    pub fn area(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    /// Rectangle of the empty point set.
    pub const EMPTY: BoundingRect = BoundingRect {
        width: 0,
        height: 0,
    };

    pub fn of_points<'a, I: IntoIterator<Item = &'a GridPoint>>(points: I) -> BoundingRect {
        let mut it = points.into_iter();
        let Some(first) = it.next() else {
            return BoundingRect::EMPTY;
        };
        let (mut min_x, mut max_x) = (first.x, first.x);
        let (mut min_y, mut max_y) = (first.y, first.y);
        for p in it {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
        BoundingRect {
            width: (max_x - min_x + 1) as u32,
            height: (max_y - min_y + 1) as u32,
        }
    }
}

impl fmt::Display for BoundingRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}
