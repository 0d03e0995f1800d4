/// Conserved unknowns of the full 1D system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState1D {
    pub h: f64,
    pub hu: f64,
    pub hw: f64,
    pub hsigma: f64,
    pub hp: f64,
    pub hpb: f64,
}

/// Conserved unknowns of the full 2D system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState2D {
    pub h: f64,
    pub hu: f64,
    pub hv: f64,
    pub hw: f64,
    pub hsigma: f64,
    pub hp: f64,
    pub hpb: f64,
}

/// Conserved unknowns of the mild-bottom 1D system.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MildState1D {
    pub h: f64,
    pub hu: f64,
    pub hw: f64,
    pub hp: f64,
}

/// Depth together with the depth-averaged fields. Unused fields are zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrimitiveState {
    pub h: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub sigma: f64,
    pub p: f64,
    pub pb: f64,
}

/// Spatial derivatives of the conserved state and of the bottom elevation.
/// `dy`/`dzb_dy` are ignored by one-dimensional systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateGradient<const NV: usize> {
    pub dx: [f64; NV],
    pub dy: [f64; NV],
    pub dzb_dx: f64,
    pub dzb_dy: f64,
}

impl<const NV: usize> StateGradient<NV> {
    pub fn zero() -> Self {
        Self { dx: [0.0; NV], dy: [0.0; NV], dzb_dx: 0.0, dzb_dy: 0.0 }
    }

    pub fn along_x(dx: [f64; NV], dzb_dx: f64) -> Self {
        Self { dx, dzb_dx, ..Self::zero() }
    }
}

impl From<ConservedState1D> for [f64; 6] {
    fn from(s: ConservedState1D) -> Self {
        [s.h, s.hu, s.hw, s.hsigma, s.hp, s.hpb]
    }
}

impl From<[f64; 6]> for ConservedState1D {
    fn from(q: [f64; 6]) -> Self {
        Self { h: q[0], hu: q[1], hw: q[2], hsigma: q[3], hp: q[4], hpb: q[5] }
    }
}

impl From<ConservedState2D> for [f64; 7] {
    fn from(s: ConservedState2D) -> Self {
        [s.h, s.hu, s.hv, s.hw, s.hsigma, s.hp, s.hpb]
    }
}

impl From<[f64; 7]> for ConservedState2D {
    fn from(q: [f64; 7]) -> Self {
        Self { h: q[0], hu: q[1], hv: q[2], hw: q[3], hsigma: q[4], hp: q[5], hpb: q[6] }
    }
}

impl From<MildState1D> for [f64; 4] {
    fn from(s: MildState1D) -> Self {
        [s.h, s.hu, s.hw, s.hp]
    }
}

impl From<[f64; 4]> for MildState1D {
    fn from(q: [f64; 4]) -> Self {
        Self { h: q[0], hu: q[1], hw: q[2], hp: q[3] }
    }
}
