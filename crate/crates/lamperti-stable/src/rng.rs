//! Counter-based random number generation.
//!
//! Simulation draws are addressed, not streamed: the value of draw `i` of
//! kind `kind` in block `block` of path `path` is a pure function of
//! `(seed, path, block, kind, i)`. Paths can therefore be generated in
//! parallel, in any order, and still be bit-identical run to run.

/// Draw kinds, kept distinct so that e.g. jump radii and jump times never
/// share a counter stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrawKind {
    /// Unit-exponential increments of the arrival ladder.
    Exponential = 0,
    /// Uniform jump times on [0, T).
    JumpTime = 1,
    /// Direction picks on the sphere {-1, +1}.
    Direction = 2,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One addressed stream: all draws of one kind within one (path, block) cell.
#[derive(Debug, Clone, Copy)]
pub struct Stream {
    prefix: u64,
}

impl Stream {
    pub fn new(seed: u64, path: u64, block: u64, kind: DrawKind) -> Self {
        let mut h = splitmix64(seed ^ 0x6c62_272e_07bb_0142);
        h = splitmix64(h ^ path.wrapping_mul(GOLDEN));
        h = splitmix64(h ^ block.wrapping_mul(GOLDEN));
        h = splitmix64(h ^ (kind as u64).wrapping_mul(GOLDEN));
        Stream { prefix: h }
    }

    #[inline]
    pub fn bits(&self, i: u64) -> u64 {
        splitmix64(self.prefix ^ i.wrapping_mul(GOLDEN))
    }

    /// Uniform on (0, 1], suitable as -ln input.
    #[inline]
    pub fn unit_pos(&self, i: u64) -> f64 {
        (((self.bits(i) >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// Uniform on [0, 1).
    #[inline]
    pub fn unit(&self, i: u64) -> f64 {
        ((self.bits(i) >> 11) as f64) * (1.0 / 9007199254740992.0)
    }

    /// Unit-exponential variate.
    #[inline]
    pub fn exponential(&self, i: u64) -> f64 {
        -self.unit_pos(i).ln()
    }
}
