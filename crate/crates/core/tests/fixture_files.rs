use std::path::Path;

use ifslab_core::{fixtures, OneParamFamily};

#[test]
fn bundled_files_match_builtin_fixtures() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let builtin = fixtures::all();
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    let mut expected: Vec<String> = builtin.iter().map(|f| format!("{}.json", f.name)).collect();
    expected.sort();
    assert_eq!(names, expected);
    for f in &builtin {
        let text = std::fs::read_to_string(dir.join(format!("{}.json", f.name))).unwrap();
        assert_eq!(text, f.to_json() + "\n", "{}", f.name);
        assert_eq!(&OneParamFamily::from_json(&text).unwrap(), f);
    }
}
