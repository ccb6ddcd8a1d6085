use serde::Serialize;

/// Canonical JSON text: object keys sorted, no insignificant whitespace.
///
/// Relies on `serde_json::Map` being ordered (the `preserve_order` feature
/// must stay off in this workspace).
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let value = serde_json::to_value(value)?;
    serde_json::to_string(&value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Unsorted {
        zeta: u8,
        alpha: Inner,
    }

    #[derive(Serialize)]
    struct Inner {
        y: bool,
        b: &'static str,
    }

    #[test]
    fn keys_are_sorted_at_every_depth() {
        let v = Unsorted {
            zeta: 1,
            alpha: Inner { y: true, b: "x" },
        };
        assert_eq!(
            canonical_json(&v).unwrap(),
            r#"{"alpha":{"b":"x","y":true},"zeta":1}"#
        );
    }
}
