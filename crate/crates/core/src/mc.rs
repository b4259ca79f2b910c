//! Counter-based sampling of `dA_alpha` on the polydisc.
//!
//! Every sample is a pure function of `(seed, stream_id, index)`, so results
//! do not depend on how work is split across threads. The generator is
//! Philox4x32-10 keyed by `seed ^ stream_id` with the sample index and the
//! coordinate in the counter.

use num_traits::Float;
use num_complex::Complex64;

use crate::error::Result;
use crate::quadrature::check_alpha;

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let prod = a as u64 * b as u64;
    ((prod >> 32) as u32, prod as u32)
}

/// Philox4x32 with 10 rounds.
pub fn philox4x32(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut c = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(PHILOX_W0);
            k[1] = k[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, c[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, c[2]);
        c = [hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0];
    }
    c
}

/// Uniform on `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_f64(hi: u32, lo: u32) -> f64 {
    let bits = ((hi as u64) << 32 | lo as u64) >> 11;
    bits as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Stateless counter-based stream: `draw(counter, lane)` gives two
/// independent uniforms on `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterRng {
    key: [u32; 2],
}

impl CounterRng {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let k = seed ^ stream_id;
        CounterRng { key: [k as u32, (k >> 32) as u32] }
    }

    pub fn draw(&self, counter: u64, lane: u64) -> (f64, f64) {
        let out = philox4x32(
            [counter as u32, (counter >> 32) as u32, lane as u32, (lane >> 32) as u32],
            self.key,
        );
        (unit_f64(out[0], out[1]), unit_f64(out[2], out[3]))
    }
}

/// Stream id for a textual label, so that one top-level seed fans out into
/// independent, reproducible per-task streams (FNV-1a followed by a
/// splitmix finalizer).
pub fn stream_for_label(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

/// Draws points of `D^n` distributed as `dA_alpha(z_1) ... dA_alpha(z_n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McSampler {
    alpha: f64,
    nvars: usize,
    seed: u64,
    stream_id: u64,
    rng: CounterRng,
}

impl McSampler {
    pub fn new(alpha: f64, nvars: usize, seed: u64, stream_id: u64) -> Result<Self> {
        check_alpha(alpha)?;
        if nvars == 0 {
            return Err(crate::Error::InvalidParameter("sampler needs at least one variable"));
        }
        Ok(McSampler { alpha, nvars, seed, stream_id, rng: CounterRng::new(seed, stream_id) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Inverse CDF of the law of `t = |z|^2`: `t = 1 - (1 - u)^(1/(alpha-1))`.
    pub fn radial_from_uniform(&self, u: f64) -> f64 {
        1.0 - (1.0 - u).powf(1.0 / (self.alpha - 1.0))
    }

    /// Fills `out` (length `nvars`) with sample number `index`.
    pub fn sample_point_into(&self, index: u64, out: &mut [Complex64]) {
        debug_assert_eq!(out.len(), self.nvars);
        for (lane, z) in out.iter_mut().enumerate() {
            let (u, v) = self.rng.draw(index, lane as u64);
            let t = self.radial_from_uniform(u);
            *z = Complex64::from_polar(t.sqrt(), 2.0 * core::f64::consts::PI * v);
        }
    }

    pub fn sample_point(&self, index: u64) -> alloc::vec::Vec<Complex64> {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); self.nvars];
        self.sample_point_into(index, &mut out);
        out
    }
}
