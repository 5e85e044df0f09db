use super::{ExperimentConfig, PatternSource, ReferenceKind};
use crate::error::{Error, Result};
use crate::estimator::SolverMethod;
use crate::synth::ProcessSpec;

pub const PRESET_NAMES: &[&str] = &[
    "ma-lines",
    "sparse-multiband-noncompressive",
    "sparse-multiband-compressive",
    "sparse-multiband-compressive-long",
    "cognitive-radio",
    "cognitive-radio-fine",
];

/// Built-in scenario by name; every preset uses seed 0 and 100 trials.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let base = |process, pattern, l, q, n, solver, reference| ExperimentConfig {
        process,
        pattern,
        l,
        q,
        n,
        solver,
        trials: 100,
        seed: 0,
        reference,
        half_length: crate::sampler::DEFAULT_HALF_LENGTH,
        output: None,
    };
    let random = PatternSource::Random { seed: None };
    let config = match name {
        "ma-lines" => base(
            ProcessSpec::ma_lines_example(),
            random,
            64,
            50,
            10_000,
            SolverMethod::Ls,
            ReferenceKind::True,
        ),
        "sparse-multiband-noncompressive" => base(
            ProcessSpec::sparse_two_band_example(),
            random,
            128,
            20,
            1000,
            SolverMethod::Ls,
            ReferenceKind::Welch,
        ),
        "sparse-multiband-compressive" | "sparse-multiband-compressive-long" => base(
            ProcessSpec::sparse_two_band_example(),
            PatternSource::Ruler { order: 7 },
            128,
            7,
            if name.ends_with("long") { 10_000 } else { 1000 },
            SolverMethod::Nnls,
            ReferenceKind::Welch,
        ),
        "cognitive-radio" => base(
            ProcessSpec::notched_example(),
            random,
            64,
            25,
            4096,
            SolverMethod::Ls,
            ReferenceKind::Welch,
        ),
        "cognitive-radio-fine" => base(
            ProcessSpec::notched_example(),
            random,
            128,
            50,
            2048,
            SolverMethod::Ls,
            ReferenceKind::Welch,
        ),
        other => {
            return Err(Error::config(
                "preset",
                format!("unknown preset `{other}`; expected one of {}", PRESET_NAMES.join(", ")),
            ))
        }
    };
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for name in PRESET_NAMES {
            preset(name).unwrap().validate().unwrap();
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn preset_parameters() {
        let shape = |n: &str| {
            let c = preset(n).unwrap();
            (c.l, c.q, c.n)
        };
        assert_eq!(shape("ma-lines"), (64, 50, 10_000));
        assert_eq!(shape("sparse-multiband-noncompressive"), (128, 20, 1000));
        assert_eq!(shape("sparse-multiband-compressive"), (128, 7, 1000));
        assert_eq!(shape("sparse-multiband-compressive-long"), (128, 7, 10_000));
        assert_eq!(shape("cognitive-radio"), (64, 25, 4096));
        assert_eq!(shape("cognitive-radio-fine"), (128, 50, 2048));
        assert_eq!(preset("sparse-multiband-compressive").unwrap().pattern, PatternSource::Ruler { order: 7 });
    }
}
