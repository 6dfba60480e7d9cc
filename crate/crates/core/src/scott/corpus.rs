//! Named structures with a chosen basis, for building and checking Scott
//! sentences.

use crate::diagrams::{Code, Diagram, DiagramError, Emitter};
use crate::exact_algebra::int;
use crate::fd_fields::{
    cyclo_emitter, radical_field, CycloTower, PureTranscendental, TowerEmitter,
};
use crate::tfab::{DivisibilityType, GroupEmitter, Rank1Group};

use super::build::{scott_fd, scott_tfab, ScottError};
use super::sentence::InfSentence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Group,
    Field,
}

pub struct Structure {
    pub name: &'static str,
    pub kind: Kind,
    pub diagram: Diagram,
    pub basis: Vec<Code>,
    pub stage: u64,
}

/// Names accepted by [`structure`].
pub const CORPUS: [&str; 7] = [
    "Z",
    "Z[1/2]",
    "G_all_p",
    "Q(t)",
    "Q(t^(1/3))",
    "Q(zeta_3)",
    "Q(zeta_3)(t)",
];

fn rank1(ty: &str, stage: u64) -> Result<(Diagram, Vec<Code>), DiagramError> {
    let t = DivisibilityType::parse(ty).expect("valid literal");
    let mut g = GroupEmitter::with_defaults(Box::new(Rank1Group { ty: t }));
    let one = g.code_for(&[int(1)], stage.max(1));
    g.run_to(stage)?;
    Ok((g.diagram().clone(), one.into_iter().collect()))
}

/// Run the named structure to `stage`.
pub fn structure(name: &str, stage: u64) -> Result<Option<Structure>, DiagramError> {
    let Some(name) = CORPUS.iter().copied().find(|&n| n == name) else {
        return Ok(None);
    };
    let (kind, (diagram, basis)) = match name {
        "Z" => (Kind::Group, rank1("*:0", stage)?),
        "Z[1/2]" => (Kind::Group, rank1("2:inf", stage)?),
        "G_all_p" => (Kind::Group, rank1("*:1", stage)?),
        "Q(t)" | "Q(zeta_3)(t)" => {
            let n = if name == "Q(t)" { 1 } else { 3 };
            let mut f = PureTranscendental::with_defaults(cyclo_emitter(CycloTower::fixed(n)?));
            f.run_to(stage)?;
            (
                Kind::Field,
                (f.diagram().clone(), f.t_code().into_iter().collect()),
            )
        }
        "Q(t^(1/3))" => {
            let mut f = TowerEmitter::with_defaults(radical_field(&[3])?);
            f.run_to(stage)?;
            let t = f.code_of(&f.tower().t());
            (Kind::Field, (f.diagram().clone(), t.into_iter().collect()))
        }
        _ => {
            let mut f = cyclo_emitter(CycloTower::fixed(3)?);
            f.run_to(stage)?;
            (Kind::Field, (f.diagram().clone(), vec![]))
        }
    };
    Ok(Some(Structure {
        name,
        kind,
        diagram,
        basis,
        stage,
    }))
}

impl Structure {
    pub fn sentence(&self) -> Result<InfSentence, ScottError> {
        let mut s = match self.kind {
            Kind::Group => scott_tfab(&self.diagram, &self.basis, self.stage),
            Kind::Field => scott_fd(&self.diagram, &self.basis, self.stage),
        }?;
        s.structure = format!("{} ({})", self.name, s.structure);
        Ok(s)
    }
}

/// Stage and (witness, generator) bounds at which the pairs below are
/// separated.
pub const DISCRIMINATION_STAGE: u64 = 300;
pub const DISCRIMINATION_BOUNDS: (u64, usize) = (6, 40);

/// (sentence of, evaluated on): non-isomorphic pairs that reach
/// `false@bound` at the bounds above.
pub const DISCRIMINATING_PAIRS: &[(&str, &str)] = &[
    ("Z[1/2]", "Z"),
    ("G_all_p", "Z"),
    ("G_all_p", "Z[1/2]"),
    ("Q(t)", "Q(zeta_3)"),
    ("Q(t)", "Q(zeta_3)(t)"),
    ("Q(zeta_3)", "Q(t)"),
    ("Q(zeta_3)", "Q(zeta_3)(t)"),
    ("Q(zeta_3)(t)", "Q(t)"),
];
