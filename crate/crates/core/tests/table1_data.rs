use serde_json::Value;
use sha2::{Digest, Sha256};
use traceforge::twist::{table1_rows, TABLE1_JSON};

const TABLE1_SHA256: &str = "54900844b8b3b200498aeadf148ccbdce0d31918e409c5240b9cd74df9ee2e6c";

#[test]
fn embedded_table_is_unchanged() {
    let digest = Sha256::digest(TABLE1_JSON.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hex, TABLE1_SHA256);
}

#[test]
fn rows_cover_even_d_up_to_42() {
    let raw: Vec<Value> = serde_json::from_str(TABLE1_JSON).unwrap();
    let ds: Vec<i64> = raw.iter().map(|r| r["d"].as_i64().unwrap()).collect();
    assert_eq!(ds, vec![2, 6, 10, 14, 22, 26, 30, 34, 38, 42]);
    let rows = table1_rows();
    assert_eq!(rows.len(), 10);
    for row in &rows {
        assert_eq!(row.q1.len(), 4);
        assert_eq!(row.q2.len(), 2);
        assert!(row.a1.iter().all(|r| r.len() == 4));
        assert!(row.a2.iter().all(|r| r.len() == 2));
    }
}
