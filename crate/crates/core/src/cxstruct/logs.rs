//! Commuting real logarithms of the action.

use super::{describe_character, real_component_structure, two_pi_times, CxError, Decision};
use crate::exactla::IntMatrix;
use crate::extension::ExtensionData;
use crate::field::{Field, Mat};
use crate::matgroup::{closure, isotypic, ComponentKind, Isotypic, IsotypicDecomposition};

/// Rotation data on one invariant component.
#[derive(Clone, Debug)]
struct Block {
    projector: Mat<f64>,
    structure: Option<Mat<f64>>,
    /// Per generator, the rotation angle as a fraction of a turn in `(−1/2, 1/2]`.
    turns: Vec<f64>,
}

/// `Xᵢ` with `exp(Xᵢ) = Aᵢ`, all commuting; `t ↦ exp(Σ tᵢXᵢ)` extends the action.
#[derive(Clone, Debug)]
pub struct RealExtensionCert {
    pub logs: Vec<Mat<f64>>,
    /// `max |exp(Xᵢ) − Aᵢ|` over generators and entries.
    pub exp_residual: f64,
    /// `max |XᵢXⱼ − XⱼXᵢ|`.
    pub commutator_residual: f64,
    pub pass: bool,
    blocks: Vec<Block>,
}

impl RealExtensionCert {
    /// `exp(Σ tᵢXᵢ)` in closed form: a rotation on each component.
    pub fn exp_at(&self, t: &[f64]) -> Mat<f64> {
        let n = self.logs.first().map_or(0, Mat::rows);
        let mut out = Mat::<f64>::zeros(n, n);
        for b in &self.blocks {
            let angle = two_pi_times(b.turns.iter().zip(t).map(|(a, s)| a * s).sum());
            out = out.add(&b.projector.scale(&angle.cos()));
            if let Some(j) = &b.structure {
                out = out.add(&j.scale(&angle.sin()));
            }
        }
        out
    }

    /// Whether every log has only real eigenvalues, i.e. all logs vanish.
    pub fn real_spectrum(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.turns.iter().all(|&t| t == 0.0))
    }
}

fn blocks_in<F: Field>(d: &IsotypicDecomposition<F>) -> Result<Vec<Block>, String> {
    let mut blocks = Vec::new();
    for c in &d.components {
        match c.kind {
            ComponentKind::Real => {
                let flips: Vec<usize> = (0..c.character.len())
                    .filter(|&i| c.character[i].num != 0)
                    .collect();
                if flips.is_empty() {
                    blocks.push(Block {
                        projector: c.projector.to_f64(),
                        structure: None,
                        turns: vec![0.0; c.character.len()],
                    });
                    continue;
                }
                let j = real_component_structure(c).ok_or_else(|| {
                    format!(
                        "A{} acts as -1 on a real component of odd dimension {} (character {})",
                        flips[0] + 1,
                        c.dim,
                        describe_character(&c.character)
                    )
                })?;
                blocks.push(Block {
                    projector: c.projector.to_f64(),
                    structure: Some(j.to_f64()),
                    turns: c
                        .character
                        .iter()
                        .map(|t| if t.num == 0 { 0.0 } else { 0.5 })
                        .collect(),
                });
            }
            ComponentKind::ComplexPair => {
                let turns = c
                    .character
                    .iter()
                    .map(|t| {
                        let (num, den) = t.signed();
                        num as f64 / den as f64
                    })
                    .collect();
                blocks.push(Block {
                    projector: c.projector.to_f64(),
                    structure: c.complex_structure.as_ref().map(Mat::to_f64),
                    turns,
                });
            }
        }
    }
    Ok(blocks)
}

/// Condition (b) from a decomposition of the image generated by `actions`.
pub fn real_extension(
    actions: &[IntMatrix],
    decomposition: &Isotypic,
) -> Decision<RealExtensionCert> {
    let blocks = match decomposition {
        Isotypic::Exact(d) => blocks_in(d),
        Isotypic::Approx(d) => blocks_in(d),
    };
    let blocks = match blocks {
        Ok(b) => b,
        Err(w) => return Decision::Fails(w),
    };
    let dim = actions.first().map_or(0, IntMatrix::rows);
    let logs: Vec<Mat<f64>> = (0..actions.len())
        .map(|i| {
            let mut x = Mat::<f64>::zeros(dim, dim);
            for b in &blocks {
                if let Some(j) = &b.structure {
                    x = x.add(&j.scale(&two_pi_times(b.turns[i])));
                }
            }
            x
        })
        .collect();
    let mut cert = RealExtensionCert {
        logs,
        exp_residual: 0.0,
        commutator_residual: 0.0,
        pass: false,
        blocks,
    };
    for (i, a) in actions.iter().enumerate() {
        let mut t = vec![0.0; actions.len()];
        t[i] = 1.0;
        cert.exp_residual = cert
            .exp_residual
            .max(cert.exp_at(&t).residual(&a.to_field()));
        for j in i + 1..actions.len() {
            let (x, y) = (&cert.logs[i], &cert.logs[j]);
            cert.commutator_residual = cert.commutator_residual.max(x.mul(y).residual(&y.mul(x)));
        }
    }
    cert.pass = cert.exp_residual <= 1e-9 && cert.commutator_residual <= 1e-9;
    Decision::Holds(cert)
}

/// Condition (b) for the data.
pub fn check_real_extension(
    data: &ExtensionData,
    closure_cap: usize,
) -> Result<Decision<RealExtensionCert>, CxError> {
    let group = closure(data.actions(), closure_cap)?;
    Ok(real_extension(data.actions(), &isotypic(&group)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::DEFAULT_CLOSURE_CAP;
    use std::f64::consts::PI;

    fn one_gen(a: &[&[i64]]) -> ExtensionData {
        ExtensionData::from_i64(1, 1, &[a, &[&[1, 0], &[0, 1]]], &[]).unwrap()
    }

    fn cert(a: &[&[i64]]) -> RealExtensionCert {
        match check_real_extension(&one_gen(a), DEFAULT_CLOSURE_CAP).unwrap() {
            Decision::Holds(c) => c,
            Decision::Fails(w) => panic!("{w}"),
        }
    }

    #[test]
    fn trivial_action_has_zero_logs() {
        let c = cert(&[&[1, 0], &[0, 1]]);
        assert!(c.pass && c.real_spectrum());
        assert!(c.logs.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn minus_identity_is_a_half_turn() {
        let c = cert(&[&[-1, 0], &[0, -1]]);
        assert!(c.pass && !c.real_spectrum());
        let expected = Mat::from_fn(2, 2, |i, j| [[0.0, -PI], [PI, 0.0]][i][j]);
        assert!(c.logs[0].residual(&expected) < 1e-12);
    }

    #[test]
    fn rotations_of_order_three_four_six() {
        for a in [
            &[&[0, -1][..], &[1, -1]][..],
            &[&[0, -1][..], &[1, 0]][..],
            &[&[1, -1][..], &[1, 0]][..],
        ] {
            let c = cert(a);
            assert!(c.pass, "exp residual {}", c.exp_residual);
        }
    }

    #[test]
    fn reflection_fails_b() {
        let d = check_real_extension(&one_gen(&[&[-1, 0], &[0, 1]]), DEFAULT_CLOSURE_CAP).unwrap();
        assert!(d.reason().unwrap().contains("A1 acts as -1"));
    }
}
