use jacobi_core::algebra::{Context, RatExpr, Scalar};

pub fn rational(text: &str) -> Result<Scalar, String> {
    RatExpr::parse(text.trim(), &Context::free(&[], &[]))
        .ok()
        .and_then(|e| e.as_constant())
        .ok_or_else(|| format!("`{}` is not a rational number", text.trim()))
}

/// `name=rational`.
pub fn assignment(text: &str) -> Result<(String, Scalar), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=RATIONAL, got `{text}`"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("missing name in `{text}`"));
    }
    Ok((name.to_string(), rational(value)?))
}

fn vector(text: &str) -> Result<[Scalar; 4], String> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("expected `[a,b,c,d]`, got `{text}`"))?;
    let parts = inner.split(',').map(rational).collect::<Result<Vec<_>, _>>()?;
    parts
        .try_into()
        .map_err(|p: Vec<Scalar>| format!("expected 4 components, got {}", p.len()))
}

/// `symbolic` gives `None`; otherwise `x0=[..],k=[..]`.
pub fn geodesic(text: &str) -> Result<Option<([Scalar; 4], [Scalar; 4])>, String> {
    let text = text.trim();
    if text == "symbolic" {
        return Ok(None);
    }
    let rest = text
        .strip_prefix("x0=")
        .ok_or_else(|| format!("expected `symbolic` or `x0=[..],k=[..]`, got `{text}`"))?;
    let (x, k) = rest
        .split_once("],")
        .ok_or_else(|| format!("expected `x0=[..],k=[..]`, got `{text}`"))?;
    let k = k
        .trim()
        .strip_prefix("k=")
        .ok_or_else(|| format!("expected `k=[..]` after the base point in `{text}`"))?;
    Ok(Some((vector(&format!("{x}]"))?, vector(k)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use jacobi_core::algebra::{int, rat};

    #[test]
    fn parses_assignments() {
        assert_eq!(assignment("m=3/2").unwrap(), ("m".into(), rat(3, 2)));
        assert_eq!(assignment("k1 = -2").unwrap(), ("k1".into(), int(-2)));
        assert!(assignment("m").is_err());
        assert!(assignment("m=x").is_err());
        assert!(assignment("=1").is_err());
    }

    #[test]
    fn parses_geodesics() {
        assert_eq!(geodesic("symbolic").unwrap(), None);
        let (x, k) = geodesic("x0=[0,1,2,-1/2],k=[1,0,0,0]").unwrap().unwrap();
        assert_eq!(x, [int(0), int(1), int(2), rat(-1, 2)]);
        assert_eq!(k, [int(1), int(0), int(0), int(0)]);
        assert!(geodesic("x0=[0,1,2],k=[1,0,0,0]").is_err());
        assert!(geodesic("k=[1,0,0,0]").is_err());
    }
}
