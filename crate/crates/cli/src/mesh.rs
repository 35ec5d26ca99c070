//! Tube meshes in Wavefront OBJ format.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use framecurve::{Closure, FramedCurve};

use crate::io::num;

/// A tube of circular cross-section around the curve plus a seam polyline
/// that runs along the surface in the direction of the frame vector, so the
/// twisting of the frame is visible.
pub fn tube_obj(c: &FramedCurve, radius: f64, sides: usize) -> String {
    let sides = sides.max(3);
    let n = c.gamma().len();
    let closed = c.closure() == Closure::Closed;
    let mut s = String::from("# tube mesh with frame seam\no tube\n");
    for i in 0..n {
        let (p, v) = (c.gamma()[i], c.frame()[i]);
        let b = c.binormal(i);
        for k in 0..sides {
            let a = TAU * k as f64 / sides as f64;
            let x = p + (v * a.cos() + b * a.sin()) * radius;
            let _ = writeln!(s, "v {} {} {}", num(x.x), num(x.y), num(x.z));
        }
    }
    let rings = if closed { n } else { n - 1 };
    for i in 0..rings {
        let j = (i + 1) % n;
        for k in 0..sides {
            let l = (k + 1) % sides;
            // OBJ indices are 1-based
            let idx = |r: usize, c: usize| r * sides + c + 1;
            let _ = writeln!(s, "f {} {} {} {}", idx(i, k), idx(j, k), idx(j, l), idx(i, l));
        }
    }
    s.push_str("o seam\n");
    let base = n * sides;
    for i in 0..n {
        let x = c.gamma()[i] + c.frame()[i] * (radius * 1.02);
        let _ = writeln!(s, "v {} {} {}", num(x.x), num(x.y), num(x.z));
    }
    s.push('l');
    for i in 0..n {
        let _ = write!(s, " {}", base + i + 1);
    }
    if closed {
        let _ = write!(s, " {}", base + 1);
    }
    s.push('\n');
    s
}
