//! Dispatch over the kinds of shape comparison: open or closed curves, with
//! or without their framing, and plane curves.

use std::fmt;
use std::str::FromStr;

use crate::curve::{lift, normalize_length, BaseCurve, Closure, FramedCurve, LiftSign};
use crate::error::{Error, Result};
use crate::frames::rmf_frame;
use crate::metric::{normalized_distance, Space};
use crate::planar::{planar_srt, PlanarCurve};
use crate::registration::{
    half_twist_stiefel, register_closed_framed, register_closed_unframed, register_open, register_open_unframed,
    Aligned, DPConfig, RegistrationResult,
};
use crate::stiefel::{to_stiefel, StiefelPoint};

/// Which shape space curves are compared in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    OpenFramed,
    /// Open curves modulo frame twisting.
    OpenUnframed,
    ClosedFramed,
    /// Closed curves modulo frame twisting.
    ClosedUnframed,
    /// Closed plane curves.
    Planar,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::OpenFramed,
        Mode::OpenUnframed,
        Mode::ClosedFramed,
        Mode::ClosedUnframed,
        Mode::Planar,
    ];

    pub fn space(self) -> Space {
        if self.is_closed() {
            Space::Grassmann
        } else {
            Space::Sphere
        }
    }

    pub fn is_closed(self) -> bool {
        !matches!(self, Mode::OpenFramed | Mode::OpenUnframed)
    }

    /// True if the framing is part of the shape.
    pub fn is_framed(self) -> bool {
        matches!(self, Mode::OpenFramed | Mode::ClosedFramed)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::OpenFramed => "open-framed",
            Mode::OpenUnframed => "open-unframed",
            Mode::ClosedFramed => "closed-framed",
            Mode::ClosedUnframed => "closed-unframed",
            Mode::Planar => "planar",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown mode `{s}`")))
    }
}

/// A curve as supplied by the user.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeInput {
    Framed(FramedCurve),
    Base(BaseCurve),
    Planar(PlanarCurve),
}

impl ShapeInput {
    pub fn closure(&self) -> Closure {
        match self {
            ShapeInput::Framed(c) => c.closure(),
            ShapeInput::Base(c) => c.closure(),
            ShapeInput::Planar(c) => c.closure(),
        }
    }

    fn base(&self) -> Result<BaseCurve> {
        match self {
            ShapeInput::Framed(c) => Ok(c.base().clone()),
            ShapeInput::Base(c) => Ok(c.clone()),
            ShapeInput::Planar(c) => Ok(c.to_framed()?.into_base()),
        }
    }

    fn planar(&self) -> Result<PlanarCurve> {
        match self {
            ShapeInput::Planar(c) => Ok(c.clone()),
            other => PlanarCurve::from_base(&other.base()?),
        }
    }
}

fn check_closure(input: &ShapeInput, mode: Mode) -> Result<()> {
    match (mode.is_closed(), input.closure()) {
        (true, Closure::Open) => Err(Error::NotClosed),
        (false, Closure::Closed) => Err(Error::InvalidArgument(format!(
            "mode {mode} takes open curves, got a closed one"
        ))),
        _ => Ok(()),
    }
}

/// The framing used for a curve in the given mode. Framed inputs keep their
/// frame (in unframed modes it only serves as the starting point of the
/// twist optimization); unframed inputs get the rotation-minimizing frame,
/// closed by a uniform twist for loops.
pub fn working_frame(input: &ShapeInput, mode: Mode) -> Result<FramedCurve> {
    match (mode.is_framed(), input) {
        (_, ShapeInput::Framed(c)) => Ok(c.clone()),
        (true, _) => Err(Error::InvalidArgument(format!("mode {mode} needs framed curves"))),
        (false, _) => rmf_frame(&input.base()?, mode.is_closed()),
    }
}

/// Coordinates of a curve in the shape space of `mode`: a path on the sphere
/// for open modes, an orthonormal 2-frame for closed ones. Curves are scaled
/// to length 2 first.
pub fn prepare(input: &ShapeInput, mode: Mode) -> Result<Aligned> {
    check_closure(input, mode)?;
    if mode == Mode::Planar {
        let root = planar_srt(&input.planar()?.normalized()?)?;
        return Ok(Aligned::Stiefel(root.to_stiefel()?));
    }
    let framed = normalize_length(&working_frame(input, mode)?)?;
    let q = lift(&framed, LiftSign::Plus)?;
    Ok(if mode.is_closed() {
        Aligned::Stiefel(to_stiefel(&q)?)
    } else {
        Aligned::Path(q.to_sphere())
    })
}

/// Result of [`register_pair`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairRegistration {
    pub result: RegistrationResult,
    /// The fixed input's coordinates.
    pub fixed: Aligned,
    /// True if the moving curve's framing was given a full turn to match the
    /// fixed curve's linking parity (unframed closed mode only).
    pub half_twisted: bool,
}

fn stiefel(p: &Aligned) -> Result<&StiefelPoint> {
    p.as_stiefel()
        .ok_or_else(|| Error::InvalidArgument("closed modes need Stiefel coordinates".into()))
}

fn path(p: &Aligned) -> Result<&crate::curve::QuaternionPath> {
    match p {
        Aligned::Path(q) => Ok(q),
        Aligned::Stiefel(_) => Err(Error::InvalidArgument("open modes need path coordinates".into())),
    }
}

/// Registers `p1` onto `p0` with the pipeline of `mode`.
///
/// In the unframed closed mode a parity mismatch is resolved by a half twist
/// of the moving curve's frame; framed and planar modes report it as
/// `ParityMismatch`.
pub fn register_pair(p0: &Aligned, p1: &Aligned, mode: Mode, cfg: &DPConfig) -> Result<PairRegistration> {
    let mut half_twisted = false;
    let result = match mode {
        Mode::OpenFramed => register_open(path(p0)?, path(p1)?, cfg)?,
        Mode::OpenUnframed => register_open_unframed(path(p0)?, path(p1)?, cfg)?,
        Mode::ClosedFramed | Mode::Planar => register_closed_framed(stiefel(p0)?, stiefel(p1)?, cfg)?,
        Mode::ClosedUnframed => {
            let s0 = stiefel(p0)?;
            let mut s1 = stiefel(p1)?.clone();
            if s1.class() != s0.class() {
                s1 = half_twist_stiefel(&s1)?;
                half_twisted = true;
            }
            register_closed_unframed(s0, &s1, cfg)?
        }
    };
    let fixed = match p0 {
        Aligned::Path(q) => Aligned::Path(q.to_sphere()),
        other => other.clone(),
    };
    Ok(PairRegistration {
        result,
        fixed,
        half_twisted,
    })
}

/// Normalized shape distance between two curves in `mode`.
pub fn shape_distance(c0: &ShapeInput, c1: &ShapeInput, mode: Mode, cfg: &DPConfig) -> Result<f64> {
    let reg = register_pair(&prepare(c0, mode)?, &prepare(c1, mode)?, mode, cfg)?;
    Ok(normalized_distance(reg.result.distance, mode.space()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::synth::TrigCurve;

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert!("closed".parse::<Mode>().is_err());
    }

    #[test]
    fn closed_mode_rejects_open_curve() {
        let g = GridSpec::new(32).unwrap();
        let seg = ShapeInput::Base(TrigCurve::helix(1.0, 0.5, 0.5).sample(g).unwrap());
        assert_eq!(prepare(&seg, Mode::ClosedUnframed).unwrap_err(), Error::NotClosed);
        assert!(matches!(
            prepare(&seg, Mode::OpenFramed),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(prepare(&seg, Mode::OpenUnframed), Ok(Aligned::Path(_))));
    }
}
