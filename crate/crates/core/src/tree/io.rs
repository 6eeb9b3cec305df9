//! Tree text format: a header `n root`, then `n-1` lines `child parent`.

use std::io::{BufRead, Write};

use super::RootedTree;
use crate::error::{Error, Result};
use crate::graph::io::{content_lines, parse_pair};

pub fn write_tree<W: Write>(tree: &RootedTree, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", tree.n(), tree.root())?;
    for v in 0..tree.n() {
        if let Some(p) = tree.parent(v) {
            writeln!(out, "{v} {p}")?;
        }
    }
    Ok(())
}

pub fn read_tree<R: BufRead>(input: R) -> Result<RootedTree> {
    let mut lines = content_lines(input);
    let (lineno, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })??;
    let (n, root) = parse_pair(&header, lineno)?;
    if root >= n {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("root {root} out of range"),
        });
    }
    let mut parent = vec![None; n];
    let mut count = 0;
    for line in lines {
        let (lineno, line) = line?;
        let (c, p) = parse_pair(&line, lineno)?;
        if c >= n || p >= n || c == root || parent[c].is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("invalid entry {c} {p}"),
            });
        }
        parent[c] = Some(p);
        count += 1;
    }
    if count + 1 != n {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected {} parent entries, found {count}", n - 1),
        });
    }
    RootedTree::from_parents(parent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let t = RootedTree::ternary(2).unwrap().rerooted(5).unwrap();
        let mut buf = Vec::new();
        write_tree(&t, &mut buf).unwrap();
        let back = read_tree(buf.as_slice()).unwrap();
        assert_eq!(back, t);
        assert!(read_tree("3 0\n1 0\n".as_bytes()).is_err());
    }
}
