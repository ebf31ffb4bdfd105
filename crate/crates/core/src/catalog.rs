//! Plain-text catalog of finite groups.
//!
//! Grammar (UTF-8, line oriented, `#` comments):
//!
//! ```text
//! group <order> <index> <degree> [<name>]
//! perm <i1> <i2> ... <idegree>
//! ...
//! end
//! ```
//!
//! Each `perm` line lists the images of `1..degree` of one generator.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, GroupLabel};
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: group {label}: {source}")]
    Group {
        line: usize,
        label: String,
        source: GroupError,
    },
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Groups keyed by order, each order's list sorted by catalog index.
pub struct GroupCatalog {
    by_order: BTreeMap<u32, Vec<FiniteGroup>>,
}

impl GroupCatalog {
    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let mut by_order: BTreeMap<u32, Vec<FiniteGroup>> = BTreeMap::new();
        let mut seen_labels = std::collections::HashSet::new();

        let mut header: Option<(usize, GroupLabel, usize)> = None;
        let mut perms: Vec<Permutation> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let keyword = tokens.next().unwrap();
            match keyword {
                "group" => {
                    if header.is_some() {
                        return Err(CatalogError::Parse {
                            line: lineno,
                            message: "previous group not terminated by `end`".into(),
                        });
                    }
                    let order: u32 = next_int(&mut tokens, lineno, "order")?;
                    let index: u32 = next_int(&mut tokens, lineno, "index")?;
                    let degree: usize = next_int(&mut tokens, lineno, "degree")? as usize;
                    if order == 0 || degree == 0 {
                        return Err(CatalogError::Parse {
                            line: lineno,
                            message: "order and degree must be positive".into(),
                        });
                    }
                    let name = tokens.collect::<Vec<_>>().join(" ");
                    let name = if name.is_empty() {
                        format!("G({order},{index})")
                    } else {
                        name
                    };
                    header = Some((lineno, GroupLabel { order, index, name }, degree));
                    perms.clear();
                }
                "perm" => {
                    let Some((_, _, degree)) = header else {
                        return Err(CatalogError::Parse {
                            line: lineno,
                            message: "`perm` outside a group block".into(),
                        });
                    };
                    let mut images = Vec::with_capacity(degree);
                    for _ in 0..degree {
                        images.push(next_int(&mut tokens, lineno, "image")? as u16);
                    }
                    if tokens.next().is_some() {
                        return Err(CatalogError::Parse {
                            line: lineno,
                            message: format!("more than {degree} images"),
                        });
                    }
                    let perm = Permutation::from_images(images).map_err(|e| CatalogError::Parse {
                        line: lineno,
                        message: e.to_string(),
                    })?;
                    perms.push(perm);
                }
                "end" => {
                    let Some((header_line, label, degree)) = header.take() else {
                        return Err(CatalogError::Parse {
                            line: lineno,
                            message: "`end` without a group block".into(),
                        });
                    };
                    let key = label.to_string();
                    if !seen_labels.insert((label.order, label.index, label.name.clone())) {
                        return Err(CatalogError::DuplicateLabel(key));
                    }
                    let group = FiniteGroup::from_generators(label, degree, std::mem::take(&mut perms))
                        .map_err(|source| CatalogError::Group {
                            line: header_line,
                            label: key,
                            source,
                        })?;
                    by_order.entry(group.label().order).or_default().push(group);
                }
                other => {
                    return Err(CatalogError::Parse {
                        line: lineno,
                        message: format!("unknown keyword `{other}`"),
                    });
                }
            }
        }
        if header.is_some() {
            return Err(CatalogError::Parse {
                line: text.lines().count(),
                message: "unterminated group block at end of file".into(),
            });
        }
        for groups in by_order.values_mut() {
            groups.sort_by_key(|g| g.label().index);
        }
        Ok(GroupCatalog { by_order })
    }

    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.by_order.keys().copied()
    }

    pub fn of_order(&self, order: u32) -> &[FiniteGroup] {
        self.by_order.get(&order).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All groups in deterministic (order, index) order.
    pub fn iter(&self) -> impl Iterator<Item = &FiniteGroup> {
        self.by_order.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_order.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_order.is_empty()
    }

    /// Looks a group up by order plus name (exact) or catalog index.
    pub fn find(&self, order: u32, key: &str) -> Option<&FiniteGroup> {
        let groups = self.by_order.get(&order)?;
        if let Ok(index) = key.parse::<u32>() {
            if let Some(g) = groups.iter().find(|g| g.label().index == index) {
                return Some(g);
            }
        }
        groups.iter().find(|g| g.label().name == key)
    }

    /// Parses labels of the shape `A5`, `60/5`, `60/5/A5` or `G(60,5)`.
    pub fn find_by_spec(&self, spec: &str) -> Option<&FiniteGroup> {
        if let Some(rest) = spec.strip_prefix("G(").and_then(|s| s.strip_suffix(')')) {
            let mut parts = rest.splitn(2, ',');
            let order = parts.next()?.trim().parse().ok()?;
            let index = parts.next()?.trim();
            return self.find(order, index);
        }
        let parts: Vec<&str> = spec.split('/').collect();
        match parts.as_slice() {
            [name] => self.iter().find(|g| g.label().name == *name),
            [order, key] => self.find(order.parse().ok()?, key),
            [order, key, name] => {
                let g = self.find(order.parse().ok()?, key)?;
                (g.label().name == *name).then_some(g)
            }
            _ => None,
        }
    }
}

fn next_int<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<u32, CatalogError> {
    let token = tokens.next().ok_or_else(|| CatalogError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    token.parse().map_err(|_| CatalogError::Parse {
        line,
        message: format!("invalid {what} `{token}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_file() {
        let catalog = GroupCatalog::parse("group 1 1 1 triv\nend\n").unwrap();
        assert_eq!(catalog.len(), 1);
        let g = catalog.find(1, "triv").unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn z5_by_five_cycle() {
        let catalog = GroupCatalog::parse("group 5 1 5 Z5\nperm 2 3 4 5 1\nend\n").unwrap();
        let g = catalog.find(5, "Z5").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.elements().len(), 5);
    }

    #[test]
    fn declared_order_mismatch() {
        let err = GroupCatalog::parse("group 6 1 3 bad\nperm 2 3 1\nend\n").unwrap_err();
        assert!(matches!(err, CatalogError::Group { .. }));
    }

    #[test]
    fn non_bijective_generator() {
        let err = GroupCatalog::parse("group 2 1 2 bad\nperm 1 1\nend\n").unwrap_err();
        assert!(matches!(err, CatalogError::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_error_carries_line() {
        let err = GroupCatalog::parse("group 2 1 2 ok\nperm 2 1\nfrob\nend\n").unwrap_err();
        assert!(matches!(err, CatalogError::Parse { line: 3, .. }));
    }
}
