//! Plain-text edge lists: a header line `n m`, then `m` lines `u v` with `u < v`,
//! sorted lexicographically.

use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn to_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

pub(crate) fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected two integers".into(),
            })?
            .parse()
            .map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("{e}"),
            })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

/// Lines that are blank or start with `#` are skipped.
pub(crate) fn content_lines<R: BufRead>(input: R) -> impl Iterator<Item = Result<(usize, String)>> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|r| match r {
            Ok((_, l)) => {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

pub fn read_graph<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = content_lines(input);
    let (lineno, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })??;
    let (n, m) = parse_pair(&header, lineno)?;
    let mut g = Graph::new(n)?;
    let mut seen = 0;
    for line in lines {
        let (lineno, line) = line?;
        let (u, v) = parse_pair(&line, lineno)?;
        if u >= n || v >= n || u == v {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("invalid edge {u} {v}"),
            });
        }
        if !g.add_edge(u, v) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("duplicate edge {u} {v}"),
            });
        }
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header announces {m} edges, found {seen}"),
        });
    }
    Ok(g)
}
