//! The nine semantic-preserving rewrites ("metamorphic relations").
//!
//! Each relation parses its input, rewrites every applicable site and returns
//! the new text together with a change flag. Rewrites never fail: when nothing
//! applies the input comes back unchanged with `applied == false`.

mod analysis;
mod mr1_rename_vars;
mod mr2_rename_methods;
mod mr3_compound_assign;
mod mr4_conditions;
mod mr5_binary;
mod mr6_dummy_var;
mod mr7_comment;
mod mr8_hoist_decl;
mod mr9_for_to_while;
mod rewrite;
mod types;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::syntax::{self, lexer, parse_java, ParseError};

pub use analysis::Completion;

/// Identifies one of the nine relations. The derived order is the canonical
/// composition order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum MrId {
    VariableRenaming,
    MethodRenaming,
    AssignExpression,
    ConditionalExpression,
    BinaryExpression,
    DummyVariable,
    AddingComments,
    VariableDeclaration,
    ForToWhileLoop,
}

impl MrId {
    pub const ALL: [MrId; 9] = [
        MrId::VariableRenaming,
        MrId::MethodRenaming,
        MrId::AssignExpression,
        MrId::ConditionalExpression,
        MrId::BinaryExpression,
        MrId::DummyVariable,
        MrId::AddingComments,
        MrId::VariableDeclaration,
        MrId::ForToWhileLoop,
    ];

    /// 1-based number.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<MrId> {
        MrId::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    /// Short code such as `m3`.
    pub fn code(self) -> String {
        format!("m{}", self.number())
    }

    pub fn name(self) -> &'static str {
        match self {
            MrId::VariableRenaming => "VariableRenaming",
            MrId::MethodRenaming => "MethodRenaming",
            MrId::AssignExpression => "AssignExpression",
            MrId::ConditionalExpression => "ConditionalExpression",
            MrId::BinaryExpression => "BinaryExpression",
            MrId::DummyVariable => "DummyVariable",
            MrId::AddingComments => "AddingComments",
            MrId::VariableDeclaration => "VariableDeclaration",
            MrId::ForToWhileLoop => "ForToWhileLoop",
        }
    }
}

impl fmt::Display for MrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown relation `{0}` (expected m1..m9 or MR1..MR9)")]
pub struct UnknownMr(pub String);

impl FromStr for MrId {
    type Err = UnknownMr;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        let digits = lower
            .strip_prefix("mr")
            .or_else(|| lower.strip_prefix('m'))
            .unwrap_or(&lower);
        if let Some(id) = digits.parse::<u8>().ok().and_then(MrId::from_number) {
            return Ok(id);
        }
        MrId::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| UnknownMr(s.to_string()))
    }
}

impl From<MrId> for String {
    fn from(m: MrId) -> String {
        m.code()
    }
}

impl TryFrom<String> for MrId {
    type Error = UnknownMr;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Seed and naming counters threaded through one chain of rewrites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrContext {
    pub seed: u64,
    pub var_counter: u32,
    pub meth_counter: u32,
    pub dummy_counter: u32,
}

impl MrContext {
    pub fn new(seed: u64) -> Self {
        MrContext { seed, var_counter: 1, meth_counter: 1, dummy_counter: 1 }
    }
}

impl Default for MrContext {
    fn default() -> Self {
        MrContext::new(0)
    }
}

/// Old-name to new-name tables produced by the renaming relations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenameMap {
    #[serde(default)]
    pub variable_renames: BTreeMap<String, String>,
    #[serde(default)]
    pub method_renames: BTreeMap<String, String>,
}

impl RenameMap {
    pub fn is_empty(&self) -> bool {
        self.variable_renames.is_empty() && self.method_renames.is_empty()
    }

    pub fn merge(&mut self, other: &RenameMap) {
        self.variable_renames
            .extend(other.variable_renames.iter().map(|(k, v)| (k.clone(), v.clone())));
        self.method_renames
            .extend(other.method_renames.iter().map(|(k, v)| (k.clone(), v.clone())));
    }

    /// New name to original name, over both tables.
    pub fn inverse(&self) -> HashMap<&str, &str> {
        self.variable_renames
            .iter()
            .chain(&self.method_renames)
            .map(|(old, new)| (new.as_str(), old.as_str()))
            .collect()
    }
}

/// Result of one rewrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrOutcome {
    pub text: String,
    pub applied: bool,
    pub rename_map: RenameMap,
    pub edits_count: usize,
}

impl MrOutcome {
    fn new(original: &str, text: String, sites: usize, rename_map: RenameMap) -> Self {
        let applied = syntax::text_differs(original, &text);
        MrOutcome {
            text,
            applied,
            rename_map: if applied { rename_map } else { RenameMap::default() },
            edits_count: if applied { sites.max(1) } else { 0 },
        }
    }
}

/// Apply one relation to `source`. Only an unparsable (empty) input is an error.
pub fn apply_mr(id: MrId, source: &str, ctx: &mut MrContext) -> Result<MrOutcome, ParseError> {
    let tree = parse_java(source)?;
    Ok(match id {
        MrId::VariableRenaming => mr1_rename_vars::apply(&tree, ctx),
        MrId::MethodRenaming => mr2_rename_methods::apply(&tree, ctx),
        MrId::AssignExpression => mr3_compound_assign::apply(&tree),
        MrId::ConditionalExpression => mr4_conditions::apply(&tree),
        MrId::BinaryExpression => mr5_binary::apply(&tree),
        MrId::DummyVariable => mr6_dummy_var::apply(&tree, ctx),
        MrId::AddingComments => mr7_comment::apply(&tree, ctx),
        MrId::VariableDeclaration => mr8_hoist_decl::apply(&tree),
        MrId::ForToWhileLoop => mr9_for_to_while::apply(&tree),
    })
}

macro_rules! mr_entry {
    ($(#[$doc:meta])* $name:ident => $id:expr) => {
        $(#[$doc])*
        pub fn $name(source: &str, ctx: &mut MrContext) -> Result<MrOutcome, ParseError> {
            apply_mr($id, source, ctx)
        }
    };
}

mr_entry!(
    /// Rename locals and parameters to `<name>_var<C>`.
    mr1_variable_renaming => MrId::VariableRenaming
);
mr_entry!(
    /// Rename declared methods to `<name>Method<C>` and update call sites.
    mr2_method_renaming => MrId::MethodRenaming
);
mr_entry!(
    /// `x = x op e` to `x op= e`.
    mr3_assign_expression => MrId::AssignExpression
);
mr_entry!(
    /// Flip `<`/`>` comparisons and parenthesize `&&`/`||`.
    mr4_conditional_expression => MrId::ConditionalExpression
);
mr_entry!(
    /// Commute `+`/`*`, negate `-`, take the reciprocal for floating `/`.
    mr5_binary_expression => MrId::BinaryExpression
);
mr_entry!(
    /// Insert an unused `int dummyVar<C> = 0;` per method body.
    mr6_dummy_variable => MrId::DummyVariable
);
mr_entry!(
    /// Insert a modification comment with a seeded UUID per method body.
    mr7_adding_comments => MrId::AddingComments
);
mr_entry!(
    /// Split initialised declarations and hoist the declaration.
    mr8_variable_declaration => MrId::VariableDeclaration
);
mr_entry!(
    /// Turn basic `for` loops into `while` loops.
    mr9_for_to_while => MrId::ForToWhileLoop
);

/// First name `base + suffix + n` (n counting up from `*counter`) that is not
/// already an identifier in `taken`. Advances the counter past the name used.
pub(crate) fn fresh_name(
    base: &str,
    suffix: &str,
    counter: &mut u32,
    taken: &std::collections::HashSet<String>,
) -> String {
    loop {
        let candidate = format!("{base}{suffix}{counter}");
        *counter += 1;
        if !taken.contains(&candidate) && !lexer::is_keyword(&candidate) {
            return candidate;
        }
    }
}

pub(crate) fn identifier_set(source: &str) -> std::collections::HashSet<String> {
    lexer::identifiers(source).into_iter().map(str::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse_in_several_spellings() {
        assert_eq!("m3".parse::<MrId>().unwrap(), MrId::AssignExpression);
        assert_eq!("MR9".parse::<MrId>().unwrap(), MrId::ForToWhileLoop);
        assert_eq!("DummyVariable".parse::<MrId>().unwrap(), MrId::DummyVariable);
        assert!("m0".parse::<MrId>().is_err());
        assert!("m10".parse::<MrId>().is_err());
    }

    #[test]
    fn canonical_order_follows_numbering() {
        let mut ids = MrId::ALL.to_vec();
        ids.reverse();
        ids.sort();
        assert_eq!(ids, MrId::ALL.to_vec());
        assert_eq!(MrId::ALL.iter().map(|m| m.number()).collect::<Vec<_>>(), (1..=9).collect::<Vec<_>>());
    }

    #[test]
    fn fresh_name_skips_taken() {
        let taken = ["x_var1".to_string(), "x_var2".to_string()].into_iter().collect();
        let mut c = 1;
        assert_eq!(fresh_name("x", "_var", &mut c, &taken), "x_var3");
        assert_eq!(c, 4);
    }

    #[test]
    fn empty_input_is_the_only_error() {
        let mut ctx = MrContext::default();
        for id in MrId::ALL {
            assert!(apply_mr(id, "   ", &mut ctx).is_err());
            assert!(apply_mr(id, "int (((", &mut ctx).is_ok());
        }
    }
}
