//! Matrix Market (coordinate pattern) and MacKay alist import/export.
//!
//! Alist layout follows MacKay's convention: the first line is
//! `N M` with `N` columns and `M` rows, then the maximum column and row
//! weights, the per-column and per-row weights, and finally the 1-based
//! row lists of every column followed by the column lists of every row.
//! Zero entries are accepted as padding on input and never written.

use std::fmt::Write as _;

use super::sparse::SparseBitMatrix;
use crate::error::{Error, Result};

pub fn to_matrix_market(m: &SparseBitMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix coordinate pattern general\n");
    let _ = writeln!(s, "{} {} {}", m.rows(), m.cols(), m.nnz());
    for i in 0..m.rows() {
        for &c in m.row(i) {
            let _ = writeln!(s, "{} {}", i + 1, c + 1);
        }
    }
    s
}

pub fn from_matrix_market(text: &str) -> Result<SparseBitMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let h = header.to_ascii_lowercase();
    if !h.starts_with("%%matrixmarket") || !h.contains("coordinate") || !h.contains("pattern") {
        return Err(Error::Parse { line: 1, msg: "expected a coordinate pattern Matrix Market header".into() });
    }
    let mut lines = lines.filter(|(_, l)| !l.trim_start().starts_with('%'));
    let (ln, size) = lines.next().ok_or(Error::Parse { line: 2, msg: "missing size line".into() })?;
    let nums = parse_nums(size, ln)?;
    if nums.len() != 3 {
        return Err(Error::Parse { line: ln + 1, msg: "size line must be `rows cols nnz`".into() });
    }
    let (rows, cols, nnz) = (nums[0], nums[1], nums[2]);
    let mut lists = vec![Vec::new(); rows];
    let mut count = 0;
    for (ln, l) in lines {
        let e = parse_nums(l, ln)?;
        if e.len() != 2 || e[0] == 0 || e[1] == 0 || e[0] > rows || e[1] > cols {
            return Err(Error::Parse { line: ln + 1, msg: format!("bad entry {l:?}") });
        }
        lists[e[0] - 1].push((e[1] - 1) as u32);
        count += 1;
    }
    if count != nnz {
        return Err(Error::Parse { line: 0, msg: format!("declared {nnz} entries, found {count}") });
    }
    SparseBitMatrix::from_row_lists(cols, lists)
}

pub fn to_alist(m: &SparseBitMatrix) -> String {
    let t = m.transpose();
    let col_w: Vec<usize> = (0..t.rows()).map(|c| t.row(c).len()).collect();
    let row_w: Vec<usize> = (0..m.rows()).map(|r| m.row(r).len()).collect();
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", m.cols(), m.rows());
    let _ = writeln!(s, "{} {}", col_w.iter().max().unwrap_or(&0), row_w.iter().max().unwrap_or(&0));
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "{}", join(&mut col_w.iter().copied()));
    let _ = writeln!(s, "{}", join(&mut row_w.iter().copied()));
    for c in 0..t.rows() {
        let _ = writeln!(s, "{}", join(&mut t.row(c).iter().map(|&r| r as usize + 1)));
    }
    for r in 0..m.rows() {
        let _ = writeln!(s, "{}", join(&mut m.row(r).iter().map(|&c| c as usize + 1)));
    }
    s
}

pub fn from_alist(text: &str) -> Result<SparseBitMatrix> {
    // Lines may legitimately be empty (weight-zero rows or columns), so the
    // line structure is kept exactly.
    let lines: Vec<&str> = text.lines().collect();
    let get = |i: usize| -> Result<Vec<usize>> {
        let l = lines.get(i).ok_or(Error::Parse { line: i + 1, msg: "unexpected end of alist".into() })?;
        parse_nums(l, i)
    };
    let nm = get(0)?;
    if nm.len() != 2 {
        return Err(Error::Parse { line: 1, msg: "first line must be `N M`".into() });
    }
    let (cols, rows) = (nm[0], nm[1]);
    let col_w = get(2)?;
    let row_w = get(3)?;
    if col_w.len() != cols || row_w.len() != rows {
        return Err(Error::Parse { line: 3, msg: "weight list lengths disagree with N M".into() });
    }
    let mut from_cols = vec![Vec::new(); rows];
    for c in 0..cols {
        let entries: Vec<usize> = get(4 + c)?.into_iter().filter(|&x| x != 0).collect();
        if entries.len() != col_w[c] {
            return Err(Error::Parse { line: 5 + c, msg: "column weight mismatch".into() });
        }
        for r in entries {
            if r > rows {
                return Err(Error::Parse { line: 5 + c, msg: format!("row index {r} out of range") });
            }
            from_cols[r - 1].push((c) as u32);
        }
    }
    let mut lists = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut entries: Vec<u32> = get(4 + cols + r)?.into_iter().filter(|&x| x != 0).map(|x| (x - 1) as u32).collect();
        if entries.len() != row_w[r] || entries.iter().any(|&c| c as usize >= cols) {
            return Err(Error::Parse { line: 5 + cols + r, msg: "row list inconsistent".into() });
        }
        entries.sort_unstable();
        let mut fc = from_cols[r].clone();
        fc.sort_unstable();
        if fc != entries {
            return Err(Error::Parse { line: 5 + cols + r, msg: "row and column lists disagree".into() });
        }
        lists.push(entries);
    }
    SparseBitMatrix::from_row_lists(cols, lists)
}

fn parse_nums(l: &str, ln: usize) -> Result<Vec<usize>> {
    l.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse { line: ln + 1, msg: format!("{t:?}: {e}") }))
        .collect()
}
