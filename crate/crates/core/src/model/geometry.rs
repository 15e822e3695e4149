use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{Error, Result};

/// A point in the normalised 2-D plane (BS at the origin).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Positions of every node for one channel realisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub bs: Point,
    pub ris: Point,
    pub u1: Point,
    pub u2: Point,
    pub eavesdroppers: Vec<Point>,
}

impl Geometry {
    /// The usual layout: RIS at `(d_rx, d_ry)`, every other node on the x-axis.
    pub fn on_axis(d_rx: f64, d_ry: f64, d_u1: f64, d_u2: f64, eavesdroppers: &[f64]) -> Self {
        Self {
            bs: Point::ORIGIN,
            ris: Point::new(d_rx, d_ry),
            u1: Point::new(d_u1, 0.0),
            u2: Point::new(d_u2, 0.0),
            eavesdroppers: eavesdroppers.iter().map(|&x| Point::new(x, 0.0)).collect(),
        }
    }

    pub fn d_bs_ris(&self) -> f64 {
        self.bs.distance(&self.ris)
    }

    pub fn d_ris_u1(&self) -> f64 {
        self.ris.distance(&self.u1)
    }

    pub fn d_ris_u2(&self) -> f64 {
        self.ris.distance(&self.u2)
    }

    pub fn d_ris_eavesdropper(&self, i: usize) -> f64 {
        self.ris.distance(&self.eavesdroppers[i])
    }

    /// Checks that every link used for path loss has a positive, finite length.
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, d: f64| {
            if d > 0.0 && d.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} distance must be positive, got {d}")))
            }
        };
        check("BS-RIS", self.d_bs_ris())?;
        check("RIS-U1", self.d_ris_u1())?;
        check("RIS-U2", self.d_ris_u2())?;
        for i in 0..self.eavesdroppers.len() {
            check("RIS-eavesdropper", self.d_ris_eavesdropper(i))?;
        }
        Ok(())
    }
}

/// Where a node may be placed in a trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    Fixed(Point),
    /// Uniform on the x-axis segment `[lo, hi]`.
    AxisInterval {
        lo: f64,
        hi: f64,
    },
    /// Uniform over the disk of the given centre and radius.
    Disk {
        center: Point,
        radius: f64,
    },
}

impl Placement {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Placement::Fixed(p) if p.x.is_finite() && p.y.is_finite() => Ok(()),
            Placement::AxisInterval { lo, hi } if lo.is_finite() && hi.is_finite() && lo <= hi => Ok(()),
            Placement::Disk { center, radius } if center.x.is_finite() && center.y.is_finite() && radius >= 0.0 => {
                Ok(())
            }
            other => Err(Error::domain(format!("invalid placement {other:?}"))),
        }
    }

    /// Whether sampling this placement consumes randomness.
    pub fn is_random(&self) -> bool {
        !matches!(self, Placement::Fixed(_))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match *self {
            Placement::Fixed(p) => p,
            Placement::AxisInterval { lo, hi } => Point::new(lo + (hi - lo) * rng.random::<f64>(), 0.0),
            Placement::Disk { center, radius } => {
                let r = radius * rng.random::<f64>().sqrt();
                let theta = TAU * rng.random::<f64>();
                Point::new(center.x + r * theta.cos(), center.y + r * theta.sin())
            }
        }
    }
}

/// A recipe for node positions: fixed BS and RIS, users and eavesdroppers
/// possibly drawn afresh in every trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub ris: Point,
    pub u1: Placement,
    pub u2: Placement,
    /// Every eavesdropper is drawn independently from this placement.
    pub eavesdroppers: Placement,
}

impl Deployment {
    pub fn validate(&self) -> Result<()> {
        self.u1.validate()?;
        self.u2.validate()?;
        self.eavesdroppers.validate()?;
        if !(self.ris.x.is_finite() && self.ris.y.is_finite()) {
            return Err(Error::domain("RIS position must be finite"));
        }
        Ok(())
    }

    /// Draws one geometry with `m` eavesdroppers. Users come first, then
    /// eavesdroppers in index order, so draws for different `m` share a
    /// prefix.
    pub fn sample<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Geometry {
        let u1 = self.u1.sample(rng);
        let u2 = self.u2.sample(rng);
        let eavesdroppers = (0..m).map(|_| self.eavesdroppers.sample(rng)).collect();
        Geometry { bs: Point::ORIGIN, ris: self.ris, u1, u2, eavesdroppers }
    }
}
