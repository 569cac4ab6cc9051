//! Group spec grammar.
//!
//! ```text
//! spec    := kind ":" params | "@" path
//! kind    := cyclic | dihedral | clifford | symmetric | alternating | product
//! product := "product:" spec ("," spec)+      (factors must not be products)
//! ```
//!
//! `dihedral:N` takes the group order `N = 2n`. `@path` reads a TOML Cayley
//! table (see FORMATS.md).

use std::fmt;
use std::path::{Path, PathBuf};

use grouppst_core::Group;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Clifford(usize),
    Symmetric(usize),
    Alternating(usize),
    Product(Vec<GroupSpec>),
    File(PathBuf),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if let Some(path) = text.strip_prefix('@') {
            if path.is_empty() {
                return Err(CliError::Parse("empty path after '@'".into()));
            }
            return Ok(GroupSpec::File(PathBuf::from(path)));
        }
        let (kind, params) = text
            .split_once(':')
            .ok_or_else(|| CliError::Parse(format!("group spec '{text}' lacks ':' (expected kind:params)")))?;
        if kind == "product" {
            let factors = params
                .split(',')
                .map(|f| {
                    let f = GroupSpec::parse(f)?;
                    if matches!(f, GroupSpec::Product(_)) {
                        return Err(CliError::Parse("nested products are not supported".into()));
                    }
                    Ok(f)
                })
                .collect::<Result<Vec<_>, _>>()?;
            if factors.len() < 2 {
                return Err(CliError::Parse("product needs at least two factors".into()));
            }
            return Ok(GroupSpec::Product(factors));
        }
        let n: usize = params
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("'{params}' is not a non-negative integer in '{text}'")))?;
        match kind {
            "cyclic" => Ok(GroupSpec::Cyclic(n)),
            "dihedral" => Ok(GroupSpec::Dihedral(n)),
            "clifford" => Ok(GroupSpec::Clifford(n)),
            "symmetric" => Ok(GroupSpec::Symmetric(n)),
            "alternating" => Ok(GroupSpec::Alternating(n)),
            other => Err(CliError::Parse(format!("unknown group kind '{other}'"))),
        }
    }

    /// The factors of a product, or the spec itself.
    pub fn factors(&self) -> Vec<GroupSpec> {
        match self {
            GroupSpec::Product(f) => f.clone(),
            other => vec![other.clone()],
        }
    }

    pub fn build(&self, max_order: usize) -> Result<Group, CliError> {
        let g = match self {
            GroupSpec::Cyclic(n) => Group::cyclic(*n),
            GroupSpec::Dihedral(n) => Group::dihedral(*n),
            GroupSpec::Clifford(n) => Group::clifford(*n),
            GroupSpec::Symmetric(n) => Group::symmetric(*n),
            GroupSpec::Alternating(n) => Group::alternating(*n),
            GroupSpec::File(path) => load_table(path),
            GroupSpec::Product(factors) => {
                let mut acc = factors[0].build(max_order)?;
                for f in &factors[1..] {
                    acc = acc.direct_product(&f.build(max_order)?, max_order)?;
                }
                Ok(acc)
            }
        }
        .map_err(CliError::from)?;
        if g.order() > max_order {
            return Err(CliError::Parse(format!(
                "group order {} exceeds --max-order {max_order}",
                g.order()
            )));
        }
        Ok(g)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Clifford(n) => write!(f, "clifford:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Alternating(n) => write!(f, "alternating:{n}"),
            GroupSpec::File(p) => write!(f, "@{}", p.display()),
            GroupSpec::Product(factors) => {
                write!(f, "product:")?;
                for (i, x) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    labels: Option<Vec<String>>,
    table: Vec<Vec<usize>>,
}

fn load_table(path: &Path) -> grouppst_core::Result<Group> {
    // IO and TOML problems surface as parse errors through the wrapper below
    let text = std::fs::read_to_string(path)
        .map_err(|e| grouppst_core::Error::InvalidParameter(format!("{}: {e}", path.display())))?;
    let file: TableFile = toml::from_str(&text)
        .map_err(|e| grouppst_core::Error::InvalidParameter(format!("{}: {e}", path.display())))?;
    Group::from_cayley_table(&file.table, file.labels)
}
