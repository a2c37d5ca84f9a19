use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{draw_sample_counted, PortSequence};
use crate::error::{Error, Result};
use crate::matrix::UnitaryMatrix;
use crate::rng::stream_rng;

/// Sample `index` of a batch uses stream `index` of `master`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleSeed {
    pub master: u64,
    pub index: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleBatch {
    /// Fingerprint of the unitary the samples came from.
    pub unitary_hash: String,
    pub bosons: usize,
    pub modes: usize,
    pub master_seed: u64,
    pub samples: Vec<PortSequence>,
    /// Gray moves spent on each sample.
    pub ops: Vec<u64>,
}

/// `count` independent samples; sample `i` depends only on
/// `(master_seed, i)`, so results do not depend on thread scheduling.
pub fn sample_batch(
    u: &UnitaryMatrix,
    n: usize,
    count: usize,
    master_seed: u64,
) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidBosonCount(0));
    }
    if n > u.dim() {
        return Err(Error::UnsupportedRegime {
            bosons: n,
            modes: u.dim(),
        });
    }
    let drawn: Vec<(PortSequence, u64)> = (0..count as u64)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream_rng(master_seed, index);
            let (mut seq, steps) = draw_sample_counted(u, n, &mut rng)?;
            seq.seed = Some(SampleSeed {
                master: master_seed,
                index,
            });
            Ok((seq, steps.iter().map(|s| s.gray_steps).sum()))
        })
        .collect::<Result<_>>()?;
    let (samples, ops) = drawn.into_iter().unzip();
    Ok(SampleBatch {
        unitary_hash: u.matrix().fingerprint(),
        bosons: n,
        modes: u.dim(),
        master_seed,
        samples,
        ops,
    })
}

impl SampleBatch {
    /// JSON-lines: one header object, then one object per sample with 1-based
    /// `ports`, the occupation vector `config` and the Gray-move count `ops`.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        let header = json!({
            "unitary": self.unitary_hash,
            "N": self.bosons,
            "M": self.modes,
            "master_seed": self.master_seed,
            "count": self.samples.len(),
        });
        writeln!(out, "{header}")?;
        for (idx, (s, ops)) in self.samples.iter().zip(&self.ops).enumerate() {
            let ports: Vec<usize> = s.ports.iter().map(|&l| l + 1).collect();
            let line = json!({
                "idx": idx,
                "ports": ports,
                "config": s.configuration(self.modes).occupations(),
                "ops": ops,
            });
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}
