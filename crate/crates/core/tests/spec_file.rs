use dyndeg::matinv::Family;
use dyndeg::oracle::degree_sequence;
use dyndeg::spec_file::{parse_spec, validate_spec, BuildMode, FieldSpec, MapSpecFile};
use dyndeg::Error;
use num_bigint::BigInt;

const P: u64 = 1_000_000_007;

fn explicit(field: &str, comps: &str) -> String {
    format!(r#"{{"kind": "explicit", "field": {field}, "components": {comps}}}"#)
}

#[test]
fn canonical_round_trip_is_byte_identical() {
    let docs = [
        explicit(
            "\"Z\"",
            r#"[[{"exponents":[0,1,1],"coeff":"2"},{"exponents":[2,0,0],"coeff":"-1"}],
                [{"exponents":[1,1,0],"coeff":"1"}],
                [{"exponents":[0,0,2],"coeff":"123456789012345678901234567890"}]]"#,
        ),
        r#"{"kind":"monomial","matrix":[[1,-1],[-2,-3]]}"#.to_string(),
        r#"{"kind":"matinv","q":5,"which":"K","mode":"oracle"}"#.to_string(),
        r#"{"kind":"fab","a":"-3","b":"7","field":{"prime":"1000000007"}}"#.to_string(),
    ];
    for d in &docs {
        let once = parse_spec(d).unwrap().canonical().unwrap().to_json();
        let twice = parse_spec(&once).unwrap().canonical().unwrap().to_json();
        assert_eq!(once, twice);
    }
}

#[test]
fn canonical_form_sorts_and_drops_zeros() {
    let d = explicit(
        "\"Z\"",
        r#"[[{"exponents":[0,2],"coeff":"1"},{"exponents":[2,0],"coeff":"3"},{"exponents":[1,1],"coeff":"0"}],
            [{"exponents":[1,1],"coeff":"5"}]]"#,
    );
    let MapSpecFile::Explicit { components, .. } = parse_spec(&d).unwrap().canonical().unwrap()
    else {
        panic!("explicit");
    };
    let first: Vec<Vec<u32>> = components[0].iter().map(|t| t.exponents.clone()).collect();
    assert_eq!(first, vec![vec![2, 0], vec![0, 2]]);
}

#[test]
fn fab_at_one_one_is_accepted() {
    let d = format!(r#"{{"kind":"fab","a":"1","b":"1","field":{{"prime":"{P}"}}}}"#);
    let v = validate_spec(&parse_spec(&d).unwrap()).unwrap();
    assert_eq!(v.spec.as_ref().unwrap().degree(), 2);
    assert!(v.warnings.is_empty());
    let r = degree_sequence(&v.handle, 3, 2, 1).unwrap();
    assert_eq!(r.degrees[1], 2);
}

#[test]
fn fab_reduces_negative_parameters() {
    let neg = format!(r#"{{"kind":"fab","a":"-1","b":"2","field":{{"prime":"{P}"}}}}"#);
    let pos = format!(r#"{{"kind":"fab","a":"{}","b":"2","field":{{"prime":"{P}"}}}}"#, P - 1);
    let a = validate_spec(&parse_spec(&neg).unwrap()).unwrap().spec.unwrap();
    let b = validate_spec(&parse_spec(&pos).unwrap()).unwrap().spec.unwrap();
    assert_eq!(a.components(), b.components());
    let over_z = r#"{"kind":"fab","a":"1","b":"1","field":"Z"}"#;
    assert!(validate_spec(&parse_spec(over_z).unwrap()).is_err());
}

#[test]
fn unequal_degrees_are_rejected() {
    let d = explicit(
        "\"Z\"",
        r#"[[{"exponents":[2,0,0],"coeff":"1"}],
            [{"exponents":[0,1,0],"coeff":"1"}],
            [{"exponents":[0,0,3],"coeff":"1"}]]"#,
    );
    let err = validate_spec(&parse_spec(&d).unwrap()).unwrap_err();
    assert_eq!(err, Error::Inhomogeneous(vec![Some(2), Some(1), Some(3)]));
    assert!(err.to_string().contains('3'));
}

#[test]
fn common_monomial_is_divided_out_with_a_warning() {
    // x0 * [x0 : x1 : x2]
    let d = explicit(
        "\"Z\"",
        r#"[[{"exponents":[2,0,0],"coeff":"1"}],
            [{"exponents":[1,1,0],"coeff":"1"}],
            [{"exponents":[1,0,1],"coeff":"1"}]]"#,
    );
    let v = validate_spec(&parse_spec(&d).unwrap()).unwrap();
    assert!(v.spec.as_ref().unwrap().is_identity());
    assert_eq!(v.warnings.len(), 1);
    assert!(v.warnings[0].contains("[1, 0, 0]"));
}

#[test]
fn malformed_documents() {
    assert!(matches!(parse_spec("{"), Err(Error::Invalid(_))));
    assert!(parse_spec(r#"{"kind":"other"}"#).is_err());
    let short = explicit(
        "\"Z\"",
        r#"[[{"exponents":[1,0],"coeff":"1"}],[{"exponents":[0,1,0],"coeff":"1"}],[{"exponents":[0,0,1],"coeff":"1"}]]"#,
    );
    assert!(validate_spec(&parse_spec(&short).unwrap()).is_err());
    let composite = explicit("{\"prime\": \"15\"}", "[[],[]]");
    assert!(validate_spec(&parse_spec(&composite).unwrap()).is_err());
    let singular = r#"{"kind":"monomial","matrix":[[1,2],[2,4]]}"#;
    assert_eq!(
        validate_spec(&parse_spec(singular).unwrap()).unwrap_err(),
        Error::SingularExponents
    );
}

#[test]
fn matinv_modes() {
    let doc = |q: usize, mode: &str| {
        format!(r#"{{"kind":"matinv","q":{q},"which":"K","mode":"{mode}"}}"#)
    };
    let auto = validate_spec(&parse_spec(&doc(3, "auto")).unwrap()).unwrap();
    assert_eq!(auto.spec.unwrap().degree(), 7);
    let big = validate_spec(&parse_spec(&doc(5, "auto")).unwrap()).unwrap();
    assert!(big.spec.is_none());
    assert_eq!(degree_sequence(&big.handle, 1, 1, 1).unwrap().degrees, vec![1, 21]);
    assert!(validate_spec(&parse_spec(&doc(5, "symbolic")).unwrap()).is_err());
    let parsed = parse_spec(r#"{"kind":"matinv","q":2,"which":"J"}"#).unwrap();
    assert_eq!(
        parsed,
        MapSpecFile::Matinv {
            q: 2,
            which: Family::J,
            mode: BuildMode::Auto
        }
    );
    let f = MapSpecFile::Fab {
        a: BigInt::from(1),
        b: BigInt::from(2),
        field: FieldSpec::Prime(101),
    };
    assert_eq!(parse_spec(&f.to_json()).unwrap(), f);
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schema/map-spec.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

#[test]
fn schema_agrees_with_the_parser() {
    let s = schema();
    let good = [
        explicit("\"Z\"", r#"[[{"exponents":[1,0],"coeff":"2"}],[{"exponents":[0,1],"coeff":3}]]"#),
        explicit("{\"prime\":\"101\"}", r#"[[{"exponents":[1,0],"coeff":"1"}],[]]"#),
        r#"{"kind":"monomial","matrix":[[1,-1],["-2","-3"]]}"#.to_string(),
        r#"{"kind":"matinv","q":4,"which":"I"}"#.to_string(),
        r#"{"kind":"fab","a":"1","b":2,"field":{"prime":"7"}}"#.to_string(),
    ];
    for d in &good {
        let v: serde_json::Value = serde_json::from_str(d).unwrap();
        assert!(s.is_valid(&v), "{d}");
        let parsed = parse_spec(d).unwrap();
        let canon: serde_json::Value = serde_json::from_str(&parsed.canonical().unwrap().to_json()).unwrap();
        assert!(s.is_valid(&canon), "{canon}");
    }
    let bad = [
        r#"{"kind":"other"}"#,
        r#"{"kind":"matinv","q":4,"which":"X"}"#,
        r#"{"kind":"matinv","q":4,"which":"K","extra":1}"#,
        r#"{"kind":"fab","a":"1","b":"2","field":"Q"}"#,
        r#"{"kind":"monomial","matrix":[[1.5]]}"#,
    ];
    for d in bad {
        let v: serde_json::Value = serde_json::from_str(d).unwrap();
        assert!(!s.is_valid(&v), "{d}");
        assert!(parse_spec(d).is_err(), "{d}");
    }
}
