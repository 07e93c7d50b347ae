//! Conditional states prepared on the trusted side, and the full
//! probability table `P(a,b,c|x,y,z)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurements::{Dichotomic, Observable, SettingsTriple, TripartiteSettings};
use crate::qcore::{bloch_of_state, contract_prefix, kron, ComplexMatrix, DensityMatrix};

/// Conditioning events with probability at or below this are undefined.
pub const CONDITIONING_EPS: f64 = 1e-12;

fn idx4(a: u8, b: u8, x: u8, y: u8) -> usize {
    ((((x as usize) * 2 + y as usize) * 2 + a as usize) * 2) + b as usize
}

/// All binary 4-tuples `(a, b, x, y)` in storage order.
pub fn outcome_setting_tuples() -> impl Iterator<Item = (u8, u8, u8, u8)> {
    (0..16u8).map(|k| ((k >> 1) & 1, k & 1, (k >> 3) & 1, (k >> 2) & 1))
}

/// `σ_{a,b|x,y}` on Charlie's qubit for two untrusted parties.
#[derive(Clone, Debug, PartialEq)]
pub struct Assemblage2SDI {
    elements: Vec<ComplexMatrix>,
    dims: Vec<usize>,
}

impl Assemblage2SDI {
    /// Elements listed in the order of [`outcome_setting_tuples`].
    pub fn from_elements(elements: Vec<ComplexMatrix>, dims: Vec<usize>) -> Result<Self> {
        if elements.len() != 16 {
            return Err(Error::Dimension(format!(
                "expected 16 elements, got {}",
                elements.len()
            )));
        }
        if let Some(e) = elements.iter().find(|e| e.rows() != 2 || e.cols() != 2) {
            return Err(Error::Dimension(format!(
                "assemblage element is {}x{}, expected 2x2",
                e.rows(),
                e.cols()
            )));
        }
        Ok(Self { elements, dims })
    }

    pub fn element(&self, a: u8, b: u8, x: u8, y: u8) -> &ComplexMatrix {
        &self.elements[idx4(a, b, x, y)]
    }

    /// `Tr σ_{a,b|x,y} = P(a,b|x,y)`.
    pub fn weight(&self, a: u8, b: u8, x: u8, y: u8) -> f64 {
        self.element(a, b, x, y).trace().re
    }

    /// Normalised conditional state, `None` when the event has no weight.
    pub fn normalized(&self, a: u8, b: u8, x: u8, y: u8) -> Option<ComplexMatrix> {
        let w = self.weight(a, b, x, y);
        (w > CONDITIONING_EPS).then(|| self.element(a, b, x, y).scale_real(1.0 / w))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u8, u8, u8, u8), &ComplexMatrix)> {
        outcome_setting_tuples().map(move |t| (t, self.element(t.0, t.1, t.2, t.3)))
    }

    /// `Σ_{a,b} σ_{a,b|x,y}`.
    pub fn reduced_state(&self, x: u8, y: u8) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                acc = &acc + self.element(a, b, x, y);
            }
        }
        acc
    }

    pub fn total_weight(&self) -> f64 {
        self.elements.iter().map(|e| e.trace().re).sum()
    }

    pub fn source_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dump(&self) -> Vec<AssemblageEntry> {
        self.iter()
            .map(|((a, b, x, y), e)| {
                let weight = e.trace().re;
                AssemblageEntry {
                    a,
                    b,
                    x,
                    y,
                    weight,
                    bloch: (weight > CONDITIONING_EPS).then(|| bloch_of_state(e)),
                }
            })
            .collect()
    }
}

/// One row of the assemblage JSON dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssemblageEntry {
    pub a: u8,
    pub b: u8,
    pub x: u8,
    pub y: u8,
    pub weight: f64,
    /// Bloch vector of the normalised state; absent for zero-weight events.
    pub bloch: Option<[f64; 3]>,
}

/// `σ_{a|x}` on the trusted pair Bob–Charlie.
#[derive(Clone, Debug, PartialEq)]
pub struct Assemblage1SDI {
    elements: Vec<ComplexMatrix>,
    dims: Vec<usize>,
}

impl Assemblage1SDI {
    /// Elements in order `(a, x) = (0,0), (1,0), (0,1), (1,1)`.
    pub fn from_elements(elements: Vec<ComplexMatrix>, dims: Vec<usize>) -> Result<Self> {
        if elements.len() != 4 {
            return Err(Error::Dimension(format!(
                "expected 4 elements, got {}",
                elements.len()
            )));
        }
        let d = elements[0].rows();
        if elements.iter().any(|e| !e.is_square() || e.rows() != d) {
            return Err(Error::Dimension("elements differ in shape".into()));
        }
        Ok(Self { elements, dims })
    }

    pub fn element(&self, a: u8, x: u8) -> &ComplexMatrix {
        &self.elements[x as usize * 2 + a as usize]
    }

    pub fn weight(&self, a: u8, x: u8) -> f64 {
        self.element(a, x).trace().re
    }

    pub fn normalized(&self, a: u8, x: u8) -> Option<ComplexMatrix> {
        let w = self.weight(a, x);
        (w > CONDITIONING_EPS).then(|| self.element(a, x).scale_real(1.0 / w))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u8, u8), &ComplexMatrix)> {
        (0..4u8).map(move |k| ((k & 1, k >> 1), &self.elements[k as usize]))
    }

    pub fn reduced_state(&self, x: u8) -> ComplexMatrix {
        self.element(0, x) + self.element(1, x)
    }

    pub fn total_weight(&self) -> f64 {
        self.elements.iter().map(|e| e.trace().re).sum()
    }

    pub fn source_dims(&self) -> &[usize] {
        &self.dims
    }
}

fn check_tripartite(rho: &DensityMatrix, da: usize, db: usize) -> Result<()> {
    let dims = rho.dims();
    if dims.len() != 3 || dims[2] != 2 || dims[0] != da || dims[1] != db {
        return Err(Error::Dimension(format!(
            "state dims {dims:?} do not match settings ({da}, {db}, 2)"
        )));
    }
    Ok(())
}

/// Assemblage for qubit observables on Alice and Bob.
pub fn assemblage_2sdi(
    rho: &DensityMatrix,
    alice: &[Observable; 2],
    bob: &[Observable; 2],
) -> Result<Assemblage2SDI> {
    assemblage_2sdi_with(rho, &alice.map(Dichotomic::from), &bob.map(Dichotomic::from))
}

/// Assemblage for dichotomic measurements of any local dimension.
pub fn assemblage_2sdi_with(
    rho: &DensityMatrix,
    alice: &[Dichotomic; 2],
    bob: &[Dichotomic; 2],
) -> Result<Assemblage2SDI> {
    check_tripartite(rho, alice[0].dim(), bob[0].dim())?;
    if alice[1].dim() != alice[0].dim() || bob[1].dim() != bob[0].dim() {
        return Err(Error::Dimension("settings of one party differ in dimension".into()));
    }
    let elements = outcome_setting_tuples()
        .map(|(a, b, x, y)| {
            let op = kron(
                alice[x as usize].projector(a),
                bob[y as usize].projector(b),
            );
            contract_prefix(&op, rho.matrix())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Assemblage2SDI {
        elements,
        dims: rho.dims().to_vec(),
    })
}

/// Assemblage on Bob–Charlie when only Alice is untrusted.
pub fn assemblage_1sdi(rho: &DensityMatrix, alice: &[Observable; 2]) -> Result<Assemblage1SDI> {
    let dims = rho.dims();
    if dims.len() != 3 || dims[0] != 2 {
        return Err(Error::Dimension(format!(
            "expected a qubit first factor in a tripartite state, got dims {dims:?}"
        )));
    }
    let mut elements = Vec::with_capacity(4);
    for x in 0..2 {
        for a in 0..2 {
            elements.push(contract_prefix(&alice[x].projector(a), rho.matrix())?);
        }
    }
    Ok(Assemblage1SDI {
        elements,
        dims: dims.to_vec(),
    })
}

/// `P(a,b,c|x,y,z)` for binary outcomes and settings.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensor {
    p: [f64; 64],
}

fn idx6(a: u8, b: u8, c: u8, x: u8, y: u8, z: u8) -> usize {
    let s = ((x as usize) * 2 + y as usize) * 2 + z as usize;
    s * 8 + (a as usize) * 4 + (b as usize) * 2 + c as usize
}

impl CorrelationTensor {
    pub fn get(&self, a: u8, b: u8, c: u8, x: u8, y: u8, z: u8) -> f64 {
        self.p[idx6(a, b, c, x, y, z)]
    }

    /// `P(a,b|x,y)`, summing out Charlie under setting `z`.
    pub fn marginal_ab(&self, a: u8, b: u8, x: u8, y: u8, z: u8) -> f64 {
        self.get(a, b, 0, x, y, z) + self.get(a, b, 1, x, y, z)
    }

    pub fn as_slice(&self) -> &[f64; 64] {
        &self.p
    }
}

pub fn correlation_tensor(rho: &DensityMatrix, s: &SettingsTriple) -> Result<CorrelationTensor> {
    correlation_tensor_with(rho, &s.to_tripartite())
}

pub fn correlation_tensor_with(
    rho: &DensityMatrix,
    s: &TripartiteSettings,
) -> Result<CorrelationTensor> {
    let asm = assemblage_2sdi_with(rho, &s.alice, &s.bob)?;
    Ok(tensor_from_assemblage(&asm, &s.charlie))
}

/// Probabilities from an assemblage and Charlie's two observables.
pub fn tensor_from_assemblage(asm: &Assemblage2SDI, charlie: &[Observable; 2]) -> CorrelationTensor {
    let proj = [
        [charlie[0].projector(0), charlie[0].projector(1)],
        [charlie[1].projector(0), charlie[1].projector(1)],
    ];
    let mut p = [0.0; 64];
    for ((a, b, x, y), sigma) in asm.iter() {
        for z in 0..2u8 {
            for c in 0..2u8 {
                let pc = &proj[z as usize][c as usize];
                let mut acc = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        acc += (pc[(i, j)] * sigma[(j, i)]).re;
                    }
                }
                p[idx6(a, b, c, x, y, z)] = acc;
            }
        }
    }
    CorrelationTensor { p }
}

/// `P(c_z | a_x b_y)`; fails when `P(a,b|x,y) ≤ ε`.
pub fn conditional_prob(
    t: &CorrelationTensor,
    c: u8,
    z: u8,
    a: u8,
    x: u8,
    b: u8,
    y: u8,
) -> Result<f64> {
    conditional_prob_eps(t, c, z, a, x, b, y, CONDITIONING_EPS)
}

#[allow(clippy::too_many_arguments)]
pub fn conditional_prob_eps(
    t: &CorrelationTensor,
    c: u8,
    z: u8,
    a: u8,
    x: u8,
    b: u8,
    y: u8,
    eps: f64,
) -> Result<f64> {
    let joint = t.marginal_ab(a, b, x, y, z);
    if joint <= eps {
        return Err(Error::UndefinedConditional {
            a,
            b,
            x,
            y,
            probability: joint,
        });
    }
    Ok(t.get(a, b, c, x, y, z) / joint)
}
