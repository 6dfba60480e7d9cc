//! The action of Phi on isomorphisms: Y_n goes to Y_g(n), extended to
//! combinations and quotients.

use crate::diagrams::{group_sym, Code, Diagram, DiagramError, Emitter};

use super::phi::{Located, PhiEmitter};

/// Check `g` against every committed fact of `src` whose image is decided
/// in `dst`. Returns the number of facts checked.
pub fn check_homomorphism(
    src: &Diagram,
    dst: &Diagram,
    g: &dyn Fn(Code) -> Code,
) -> Result<usize, DiagramError> {
    let mut checked = 0;
    for ev in src.events() {
        let f = &ev.fact;
        let args: Vec<Code> = f.args.iter().map(|&a| g(a)).collect();
        if let Some(r) = dst.op(f.sym, &args) {
            let want = g(f.res);
            if r != want {
                let what = match f.sym {
                    group_sym::E => "identity".to_string(),
                    group_sym::NEG => format!("-{}", f.args[0]),
                    _ => format!("{} + {}", f.args[0], f.args[1]),
                };
                return Err(DiagramError::MorphismViolation(format!(
                    "{what} = {} maps to {want}, but the target has {r}",
                    f.res
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub struct PhiMorphism<G: Fn(Code) -> Code> {
    g: G,
}

/// Phi_* of the group map `g`, after checking it on the committed prefixes.
pub fn phi_morphism<E0: Emitter, E1: Emitter, G: Fn(Code) -> Code>(
    src: &PhiEmitter<E0>,
    g: G,
    dst: &PhiEmitter<E1>,
) -> Result<PhiMorphism<G>, DiagramError> {
    check_homomorphism(src.inner().diagram(), dst.inner().diagram(), &g)?;
    Ok(PhiMorphism { g })
}

impl<G: Fn(Code) -> Code> PhiMorphism<G> {
    pub fn group_map(&self, c: Code) -> Code {
        (self.g)(c)
    }

    /// Code in `dst` of the image of element `c` of `src`.
    pub fn image<E0: Emitter, E1: Emitter>(
        &self,
        src: &PhiEmitter<E0>,
        dst: &mut PhiEmitter<E1>,
        c: Code,
    ) -> Located {
        match src.representative(c) {
            Some(q) => dst.locate(&q.map_codes(&self.g)),
            None => Located::Unknown,
        }
    }
}
