use serde::{Deserialize, Serialize};

use crate::{Error, Result, SPEED_OF_LIGHT};

/// Mean Earth radius, m.
pub const EARTH_RADIUS: f64 = 6_371_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// Satellite altitude, m.
    pub sat_altitude: f64,
    pub earth_radius: f64,
    /// Central angle ψ between sub-satellite point and ground station, rad.
    pub central_angle: f64,
    /// Orbital speed, m/s.
    pub sat_velocity: f64,
    /// +1 approaching, −1 receding.
    pub direction: i8,
    /// Elevation at the ground station, degrees (informational).
    pub elevation_deg: f64,
}

impl Geometry {
    /// Geometry for a satellite seen at elevation `elevation_deg`; the
    /// central angle is `arccos(R_e/(R_e+h)·cos θ_e) − θ_e`.
    pub fn from_elevation(elevation_deg: f64, sat_altitude: f64, sat_velocity: f64, direction: i8) -> Self {
        let el = elevation_deg.to_radians();
        let ratio = EARTH_RADIUS / (EARTH_RADIUS + sat_altitude);
        Self {
            sat_altitude,
            earth_radius: EARTH_RADIUS,
            central_angle: (ratio * el.cos()).acos() - el,
            sat_velocity,
            direction,
            elevation_deg,
        }
    }

    /// Same orbit at an explicit central angle.
    pub fn with_central_angle(&self, psi: f64) -> Self {
        Self {
            central_angle: psi,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let psi_ok = self.central_angle >= 0.0 && self.central_angle < std::f64::consts::FRAC_PI_2;
        if !(self.sat_altitude > 0.0) || !(self.sat_velocity > 0.0) || !(self.earth_radius > 0.0) || !psi_ok {
            return Err(Error::InvalidParameter(format!("invalid geometry {self:?}")));
        }
        if self.direction != 1 && self.direction != -1 {
            return Err(Error::InvalidParameter("direction must be +1 or -1".into()));
        }
        Ok(())
    }
}

impl Default for Geometry {
    fn default() -> Self {
        Self::from_elevation(45.0, 500e3, 7.8e3, 1)
    }
}

/// Circular-orbit Doppler approximation
/// `(v·f_0/c)·(R_e·sin ψ/(R_e + h))·ρ`.
pub fn doppler_shift(geom: &Geometry, f0: f64) -> f64 {
    let re = geom.earth_radius;
    (geom.sat_velocity * f0 / SPEED_OF_LIGHT)
        * (re * geom.central_angle.sin() / (re + geom.sat_altitude))
        * geom.direction as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_overhead_and_is_odd() {
        let g = Geometry::default();
        assert_eq!(doppler_shift(&g.with_central_angle(0.0), 437e6), 0.0);
        let mut r = g;
        r.direction = -1;
        assert_eq!(doppler_shift(&r, 437e6), -doppler_shift(&g, 437e6));
    }

    #[test]
    fn ten_degrees_value() {
        let g = Geometry::default().with_central_angle(10f64.to_radians());
        let fd = doppler_shift(&g, 437e6);
        assert!((fd - 1830.0).abs() < 10.0, "{fd}");
    }

    #[test]
    fn elevation_45_central_angle() {
        let g = Geometry::default();
        // elevation recovered from the law of sines on the ground-centre-satellite triangle
        let r = EARTH_RADIUS + 500e3;
        let psi = g.central_angle;
        let d = (EARTH_RADIUS.powi(2) + r * r - 2.0 * EARTH_RADIUS * r * psi.cos()).sqrt();
        let el = (r * psi.sin() / d).acos();
        assert!((el.to_degrees() - 45.0).abs() < 1e-9);
        g.validate().unwrap();
    }
}
