//! Input literals: groups, fields, streams and sets.

use effred::diagrams::{Code, Diagram, DiagramError, Emitter, Relabel, Relabeled};
use effred::exact_algebra::{int, Rational};
use effred::fd_fields::{cyclo_emitter, radical_field, CycloTower, TowerEmitter};
use effred::tfab::{DivisibilityType, GroupEmitter, Rank1Group, SpanGroup};

use crate::CliError;

/// Block size of the permutations behind `@seed` copies.
pub const RELABEL_BLOCK: u64 = 8;

/// A boxed emitter usable where a sized one is expected.
pub struct DynEmitter(pub Box<dyn Emitter>);

impl Emitter for DynEmitter {
    fn diagram(&self) -> &Diagram {
        self.0.diagram()
    }

    fn stage(&self) -> u64 {
        self.0.stage()
    }

    fn step(&mut self) -> Result<(), DiagramError> {
        self.0.step()
    }
}

fn split_seed(s: &str) -> Result<(&str, Option<u64>), CliError> {
    match s.rsplit_once('@') {
        Some((body, seed)) => {
            let seed = seed
                .parse()
                .map_err(|_| CliError::Usage(format!("bad relabel seed in {s}")))?;
            Ok((body, Some(seed)))
        }
        None => Ok((s, None)),
    }
}

#[derive(Debug, Clone)]
pub enum GroupSpec {
    Rank1(String),
    Span(usize),
}

#[derive(Debug, Clone)]
pub struct Group {
    pub spec: GroupSpec,
    pub relabel: Option<Relabel>,
}

/// `2:inf,3:1`, `*:0` or `rank:r`, optionally `type:` in front and `@seed`
/// behind.
pub fn parse_group(s: &str) -> Result<Group, CliError> {
    let (body, seed) = split_seed(s)?;
    let body = body.strip_prefix("type:").unwrap_or(body);
    let spec = if let Some(r) = body.strip_prefix("rank:") {
        match r.parse() {
            Ok(r) if r > 0 => GroupSpec::Span(r),
            _ => return Err(CliError::Usage(format!("bad rank in {s}"))),
        }
    } else {
        DivisibilityType::parse(body)
            .ok_or_else(|| CliError::Usage(format!("bad type literal {s}")))?;
        GroupSpec::Rank1(body.to_string())
    };
    Ok(Group {
        spec,
        relabel: seed.map(|x| Relabel::new(x, RELABEL_BLOCK)),
    })
}

impl Group {
    pub fn rank(&self) -> usize {
        match self.spec {
            GroupSpec::Rank1(_) => 1,
            GroupSpec::Span(r) => r,
        }
    }

    /// The emitter (unpermuted) and the codes of its standard basis, found
    /// within `stages` stages.
    pub fn emitter(&self, stages: u64) -> Result<(GroupEmitter, Vec<Code>), CliError> {
        let (mut g, vecs) = match &self.spec {
            GroupSpec::Rank1(t) => {
                let ty = DivisibilityType::parse(t).expect("checked on parse");
                (
                    GroupEmitter::with_defaults(Box::new(Rank1Group { ty })),
                    vec![vec![int(1)]],
                )
            }
            GroupSpec::Span(r) => {
                let unit = |i: usize| {
                    (0..*r)
                        .map(|j| int((i == j) as i64))
                        .collect::<Vec<Rational>>()
                };
                (
                    GroupEmitter::with_defaults(Box::new(SpanGroup::standard(*r))),
                    (0..*r).map(unit).collect(),
                )
            }
        };
        let mut basis = Vec::new();
        for v in &vecs {
            let c = g.code_for(v, stages).ok_or_else(|| {
                CliError::Failed(format!("basis vector not met in {stages} stages"))
            })?;
            basis.push(c);
        }
        Ok((g, basis))
    }

    /// Emitter with the permutation applied, and basis codes mapped along.
    pub fn presented(&self, stages: u64) -> Result<(DynEmitter, Vec<Code>), CliError> {
        let (g, basis) = self.emitter(stages)?;
        Ok(match self.relabel {
            Some(r) => (
                DynEmitter(Box::new(Relabeled::new(g, r))),
                basis.iter().map(|&c| r.apply(c)).collect(),
            ),
            None => (DynEmitter(Box::new(g)), basis),
        })
    }
}

#[derive(Debug, Clone)]
pub enum FieldSpec {
    Cyclo(u64),
    Radical(Vec<u64>),
}

#[derive(Debug, Clone)]
pub struct Field {
    pub spec: FieldSpec,
    pub relabel: Option<Relabel>,
}

fn nums(s: &str) -> Option<Vec<u64>> {
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

/// `cyclo:N`, `rational`, `radical:p,q`, optionally `@seed`.
pub fn parse_field(s: &str) -> Result<Field, CliError> {
    let (body, seed) = split_seed(s)?;
    let bad = || CliError::Usage(format!("bad field spec {s}"));
    let spec = match body.split_once(':') {
        None if body == "rational" => FieldSpec::Cyclo(1),
        Some(("cyclo", n)) => FieldSpec::Cyclo(n.trim().parse().map_err(|_| bad())?),
        Some(("radical", ps)) => FieldSpec::Radical(nums(ps).ok_or_else(bad)?),
        _ => return Err(bad()),
    };
    Ok(Field {
        spec,
        relabel: seed.map(|x| Relabel::new(x, RELABEL_BLOCK)),
    })
}

impl Field {
    pub fn cyclo_tower(&self) -> Result<Option<CycloTower>, CliError> {
        match &self.spec {
            FieldSpec::Cyclo(n) => Ok(Some(
                CycloTower::fixed(*n).map_err(|e| CliError::Usage(e.to_string()))?,
            )),
            FieldSpec::Radical(_) => Ok(None),
        }
    }

    pub fn emitter(&self) -> Result<DynEmitter, CliError> {
        let e: Box<dyn Emitter> = match &self.spec {
            FieldSpec::Cyclo(_) => Box::new(cyclo_emitter(self.cyclo_tower()?.expect("cyclo"))),
            FieldSpec::Radical(ps) => Box::new(TowerEmitter::with_defaults(
                radical_field(ps).map_err(|e| CliError::Usage(e.to_string()))?,
            )),
        };
        Ok(match self.relabel {
            Some(r) => DynEmitter(Box::new(Relabeled::new(DynEmitter(e), r))),
            None => DynEmitter(e),
        })
    }
}
