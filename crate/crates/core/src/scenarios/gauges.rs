use super::run::Simulation;
use crate::error::{Error, Result};

/// Fixed probe position. `y` is ignored in 1D.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSpec {
    pub name: String,
    pub x: f64,
    pub y: f64,
}

impl GaugeSpec {
    pub fn new(name: impl Into<String>, x: f64, y: f64) -> Self {
        Self { name: name.into(), x, y }
    }
}

/// Time series recorded at one gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSeries {
    pub spec: GaugeSpec,
    pub times: Vec<f64>,
    /// Free surface `h + z_b`.
    pub eta: Vec<f64>,
    pub h: Vec<f64>,
    /// `(eta - H) / H`.
    pub a_over_h: Vec<f64>,
}

impl GaugeSeries {
    pub fn new(spec: GaugeSpec) -> Self {
        Self { spec, times: Vec::new(), eta: Vec::new(), h: Vec::new(), a_over_h: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest recorded `A/H` and the time it occurred.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.times
            .iter()
            .zip(&self.a_over_h)
            .fold(None, |best: Option<(f64, f64)>, (&t, &a)| match best {
                Some((_, b)) if b >= a => best,
                _ => Some((t, a)),
            })
    }
}

/// Samples every gauge at the simulation's current state, labelled `t`.
pub fn record_gauges(sim: &Simulation, series: &mut [GaugeSeries], still_depth: f64, t: f64) -> Result<()> {
    for s in series.iter_mut() {
        if let Some(&last) = s.times.last() {
            if !(t > last) {
                return Err(Error::Incompatible(format!("gauge '{}' sampled at {t} after {last}", s.spec.name)));
            }
        }
        let (h, eta) = sim.sample_depth(s.spec.x, s.spec.y)?;
        s.times.push(t);
        s.eta.push(eta);
        s.h.push(h);
        s.a_over_h.push((eta - still_depth) / still_depth);
    }
    Ok(())
}

/// A local maximum of a sampled profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crest {
    pub x: f64,
    pub value: f64,
}

/// Local maxima of `(x, value)` samples above `threshold`, ordered by `x`.
/// Maxima closer than `min_separation` are merged into the higher one.
pub fn detect_crests(profile: &[[f64; 2]], threshold: f64, min_separation: f64) -> Vec<Crest> {
    let mut raw: Vec<Crest> = Vec::new();
    for k in 1..profile.len().saturating_sub(1) {
        let (l, c, r) = (profile[k - 1][1], profile[k][1], profile[k + 1][1]);
        if c > threshold && c >= l && c > r {
            raw.push(Crest { x: profile[k][0], value: c });
        }
    }
    let mut out: Vec<Crest> = Vec::new();
    for c in raw {
        match out.last_mut() {
            Some(prev) if c.x - prev.x < min_separation => {
                if c.value > prev.value {
                    *prev = c;
                }
            }
            _ => out.push(c),
        }
    }
    out
}

/// `sum |v_{k+1} - v_k|`.
pub fn total_variation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crests_and_merging() {
        let prof: Vec<[f64; 2]> = (0..=400)
            .map(|k| {
                let x = k as f64 * 0.05;
                [x, (-(x - 5.0).powi(2)).exp() + 0.5 * (-(x - 12.0).powi(2)).exp() + 1e-3 * (40.0 * x).sin()]
            })
            .collect();
        let c = detect_crests(&prof, 0.1, 1.0);
        assert_eq!(c.len(), 2);
        assert!((c[0].x - 5.0).abs() < 0.1 && (c[1].x - 12.0).abs() < 0.1);
        assert!(detect_crests(&prof, 2.0, 1.0).is_empty());
        // without merging the ripple makes several maxima per hump
        assert!(detect_crests(&prof, 0.1, 0.0).len() >= 2);
    }

    #[test]
    fn variation() {
        assert_eq!(total_variation(&[0.0, 1.0, 0.5, 0.5]), 1.5);
        assert_eq!(total_variation(&[2.0]), 0.0);
        assert_eq!(total_variation(&[]), 0.0);
    }

    #[test]
    fn peak_of_series() {
        let mut s = GaugeSeries::new(GaugeSpec::new("g", 0.0, 0.0));
        assert!(s.peak().is_none());
        s.times = vec![0.0, 1.0, 2.0];
        s.a_over_h = vec![0.0, 0.3, 0.1];
        assert_eq!(s.peak(), Some((1.0, 0.3)));
    }
}
