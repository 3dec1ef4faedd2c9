//! Query pattern tokens: `?`, decimal IDs, `<iri>`, `"literal"` (with an
//! optional `@lang` or `^^<type>` suffix) and `_:blank` terms.

use anyhow::{anyhow, bail, Result};
use permtrie::{Component, Dictionary, Error, TriplePattern, WILDCARD};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Wildcard,
    Id(u64),
    Term(String),
}

pub fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut rest = input.trim_start();
    while !rest.is_empty() {
        let end = match rest.as_bytes()[0] {
            b'<' => rest.find('>').ok_or_else(|| anyhow!("unterminated IRI in pattern"))? + 1,
            b'"' => {
                let bytes = rest.as_bytes();
                let mut i = 1;
                loop {
                    match bytes.get(i) {
                        None => bail!("unterminated literal in pattern"),
                        Some(b'\\') => i += 2,
                        Some(b'"') => break,
                        Some(_) => i += 1,
                    }
                }
                i + 1 + rest[i + 1..].find(char::is_whitespace).unwrap_or(rest.len() - i - 1)
            }
            _ => rest.find(char::is_whitespace).unwrap_or(rest.len()),
        };
        let word = &rest[..end];
        tokens.push(match word {
            "?" => Token::Wildcard,
            w if w.starts_with('<') => Token::Term(w[1..w.len() - 1].to_string()),
            w if w.starts_with('"') || w.starts_with("_:") => Token::Term(w.to_string()),
            w => Token::Id(
                w.parse()
                    .map_err(|_| anyhow!("bad pattern token `{w}`: expected ?, an ID, <iri> or \"literal\""))?,
            ),
        });
        rest = rest[end..].trim_start();
    }
    if tokens.len() != 3 {
        bail!("a pattern has three tokens, got {}", tokens.len());
    }
    Ok(tokens)
}

/// Resolves tokens to IDs. Terms are looked up in the dictionary.
pub fn resolve(tokens: &[Token], dict: Option<&Dictionary>) -> Result<TriplePattern> {
    let mut ids = [WILDCARD; 3];
    for ((token, id), component) in tokens.iter().zip(&mut ids).zip(Component::ALL) {
        *id = match token {
            Token::Wildcard => WILDCARD,
            Token::Id(v) => *v,
            Token::Term(term) => {
                let dict = dict.ok_or_else(|| anyhow!("term `{term}` needs a dictionary (--dictionary)"))?;
                dict.encode(component, term).map_err(|e| match e {
                    Error::NotFound => anyhow!("unknown {component} term `{term}`"),
                    other => other.into(),
                })?
            }
        };
    }
    Ok(TriplePattern::new(ids[0], ids[1], ids[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        assert_eq!(
            tokenize("? 1 0").unwrap(),
            [Token::Wildcard, Token::Id(1), Token::Id(0)]
        );
        assert_eq!(
            tokenize(r#"<http://a b> ? "x y"@en"#).unwrap(),
            [
                Token::Term("http://a b".into()),
                Token::Wildcard,
                Token::Term("\"x y\"@en".into())
            ]
        );
        assert!(tokenize("1 2").is_err());
        assert!(tokenize("1 2 x").is_err());
        assert!(tokenize("1 2 \"open").is_err());
    }

    #[test]
    fn resolve_terms() {
        let dict = Dictionary::build(["a", "b"], ["p"], ["\"x\""]);
        let t = tokenize(r#"<b> ? "x""#).unwrap();
        assert_eq!(resolve(&t, Some(&dict)).unwrap(), TriplePattern::new(1, WILDCARD, 0));
        assert!(resolve(&t, None).is_err());
        assert!(resolve(&tokenize("<c> ? ?").unwrap(), Some(&dict)).is_err());
    }
}
