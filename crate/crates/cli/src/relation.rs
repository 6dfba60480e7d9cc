//! User-supplied Sigma3 matrices: an expression in x, y, z with oracle reads
//! a(i) and b(i). Reads at or past the use bound max(x, y, z) + 1 give false.

use std::sync::Arc;

use effred::sigma3::{Prefix, Sigma3Relation};
use evalexpr::{
    build_operator_tree, ContextWithMutableFunctions, ContextWithMutableVariables, EvalexprError,
    Function, HashMapContext, Node, Value,
};

use crate::CliError;

pub struct ExprRelation {
    source: String,
    tree: Node,
}

impl ExprRelation {
    pub fn parse(source: &str) -> Result<Self, CliError> {
        let tree = build_operator_tree(source)
            .map_err(|e| CliError::Usage(format!("relation program: {e}")))?;
        let r = ExprRelation {
            source: source.to_string(),
            tree,
        };
        // a trial run catches programs that parse but cannot evaluate
        r.eval(&[], &[], 0, 0, 0)
            .map_err(|e| CliError::Usage(format!("relation program: {e}")))?;
        Ok(r)
    }

    fn eval(&self, a: &[bool], b: &[bool], x: u64, y: u64, z: u64) -> Result<bool, EvalexprError> {
        let mut ctx = HashMapContext::new();
        for (k, v) in [("x", x), ("y", y), ("z", z)] {
            ctx.set_value(k.into(), Value::Int(v as i64))?;
        }
        ctx.set_function("a".into(), reader(Arc::new(a.to_vec())))?;
        ctx.set_function("b".into(), reader(Arc::new(b.to_vec())))?;
        self.tree.eval_boolean_with_context(&ctx)
    }
}

fn reader(bits: Arc<Vec<bool>>) -> Function {
    Function::new(move |v: &Value| {
        let i = v.as_int()?;
        if i < 0 {
            return Err(EvalexprError::CustomMessage(format!("negative index {i}")));
        }
        Ok(Value::Boolean(
            bits.get(i as usize).copied().unwrap_or(false),
        ))
    })
}

impl Sigma3Relation for ExprRelation {
    fn name(&self) -> String {
        self.source.clone()
    }

    fn use_bound(&self, x: u64, y: u64, z: u64) -> u64 {
        x.max(y).max(z) + 1
    }

    fn holds(&self, a: &Prefix, b: &Prefix, x: u64, y: u64, z: u64) -> bool {
        let u = self.use_bound(x, y, z);
        let bits = |p: &Prefix| {
            (0..u)
                .map(|i| p.get(i).unwrap_or(false))
                .collect::<Vec<_>>()
        };
        // evaluation errors count as the matrix failing
        self.eval(&bits(a), &bits(b), x, y, z).unwrap_or(false)
    }
}
