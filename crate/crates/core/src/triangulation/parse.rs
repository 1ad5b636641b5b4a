use super::{Gluing, TriangulationError};
use crate::perm::Perm4;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: line[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: line[..s].chars().count() + 1 });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> TriangulationError {
    TriangulationError::Syntax { line, column, message: message.into() }
}

fn number(tok: &Token<'_>, line: usize, what: &str) -> Result<usize, TriangulationError> {
    tok.text
        .parse::<usize>()
        .map_err(|_| syntax(line, tok.column, format!("expected {what}, found {:?}", tok.text)))
}

/// Reads the gluing table; the inverse of every listed gluing is filled in.
pub(super) fn parse_table(text: &str) -> Result<Vec<[Option<Gluing>; 4]>, TriangulationError> {
    let mut table: Option<Vec<[Option<Gluing>; 4]>> = None;
    let mut glue_lines = 0usize;
    let mut last_line = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        let Some(table) = table.as_mut() else {
            if toks[0].text != "tri" {
                return Err(syntax(lineno, toks[0].column, "expected header `tri <N>`"));
            }
            if toks.len() != 2 {
                let col = toks.get(2).map_or(content.len() + 1, |t| t.column);
                return Err(syntax(lineno, col, "header takes exactly one argument"));
            }
            let n = number(&toks[1], lineno, "tetrahedron count")?;
            if n == 0 {
                return Err(syntax(lineno, toks[1].column, "need at least one tetrahedron"));
            }
            table = Some(vec![[None; 4]; n]);
            continue;
        };
        if toks[0].text != "glue" {
            return Err(syntax(lineno, toks[0].column, format!("unknown directive {:?}", toks[0].text)));
        }
        if toks.len() != 6 {
            let col = toks.get(6).map_or(content.trim_end().chars().count() + 1, |t| t.column);
            return Err(syntax(lineno, col, "expected `glue <t> <f> -> <t'> <perm>`"));
        }
        let n = table.len();
        let tet = number(&toks[1], lineno, "tetrahedron index")?;
        if tet >= n {
            return Err(syntax(lineno, toks[1].column, format!("tetrahedron {tet} out of range 0..{n}")));
        }
        let face = number(&toks[2], lineno, "face index")?;
        if face > 3 {
            return Err(syntax(lineno, toks[2].column, format!("face {face} out of range 0..4")));
        }
        if toks[3].text != "->" {
            return Err(syntax(lineno, toks[3].column, "expected `->`"));
        }
        let other = number(&toks[4], lineno, "tetrahedron index")?;
        if other >= n {
            return Err(syntax(lineno, toks[4].column, format!("tetrahedron {other} out of range 0..{n}")));
        }
        let perm: Perm4 = toks[5].text.parse().map_err(|_| {
            syntax(lineno, toks[5].column, "permutation must be four distinct digits from 0-3")
        })?;
        let other_face = perm.apply(face);
        if tet == other && other_face == face {
            return Err(TriangulationError::SelfGluedFace { tet, face });
        }
        for (t, f) in [(tet, face), (other, other_face)] {
            if table[t][f].is_some() {
                return Err(TriangulationError::DuplicateGluing { line: lineno, tet: t, face: f });
            }
        }
        table[tet][face] = Some(Gluing { tet: other, perm });
        table[other][other_face] = Some(Gluing { tet, perm: perm.inverse() });
        glue_lines += 1;
    }
    let table = table.ok_or_else(|| syntax(last_line.max(1), 1, "missing header `tri <N>`"))?;
    let expected = 2 * table.len();
    if glue_lines > expected {
        return Err(syntax(last_line, 1, format!("expected {expected} glue lines, found {glue_lines}")));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_line_and_column() {
        let err = parse_table("tri 1\nglue 0 9 -> 0 1023\n").unwrap_err();
        assert_eq!(
            err,
            TriangulationError::Syntax {
                line: 2,
                column: 8,
                message: "face 9 out of range 0..4".into()
            }
        );
        let err = parse_table("# comment\n  tri x\n").unwrap_err();
        assert!(matches!(err, TriangulationError::Syntax { line: 2, column: 7, .. }));
        let err = parse_table("tri 1\nglue 0 0 => 0 1023\n").unwrap_err();
        assert!(matches!(err, TriangulationError::Syntax { line: 2, column: 10, .. }));
        let err = parse_table("tri 1\nglue 0 0 -> 0 1123\n").unwrap_err();
        assert!(matches!(err, TriangulationError::Syntax { line: 2, column: 15, .. }));
        assert!(matches!(parse_table(""), Err(TriangulationError::Syntax { .. })));
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = parse_table("tri 1\nglue 0 0 -> 0 1023\nglue 0 1 -> 0 1023\n").unwrap_err();
        assert_eq!(err, TriangulationError::DuplicateGluing { line: 3, tet: 0, face: 1 });
    }

    #[test]
    fn comments_and_blank_lines() {
        let table = parse_table("tri 1 # one tet\n\n# gluings\nglue 0 0 -> 0 1023 # swap\n").unwrap();
        assert!(table[0][0].is_some() && table[0][1].is_some());
        assert!(table[0][2].is_none());
    }
}
