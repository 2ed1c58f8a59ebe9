//! Porter2 (English Snowball) stemmer.
//!
//! Works on a `Vec<char>` so that the region arithmetic is in characters.
//! `Y` marks a consonantal y between the prelude and the postlude.

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn is_double(w: &[char]) -> bool {
    let n = w.len();
    n >= 2
        && w[n - 1] == w[n - 2]
        && matches!(w[n - 1], 'b' | 'd' | 'f' | 'g' | 'm' | 'n' | 'p' | 'r' | 't')
}

fn is_li_ending(c: char) -> bool {
    matches!(c, 'c' | 'd' | 'e' | 'g' | 'h' | 'k' | 'm' | 'n' | 'r' | 't')
}

/// Short syllable at the end of `w`.
fn ends_short_syllable(w: &[char]) -> bool {
    let n = w.len();
    if n >= 3 {
        let (a, b, c) = (w[n - 3], w[n - 2], w[n - 1]);
        if !is_vowel(a) && is_vowel(b) && !is_vowel(c) && !matches!(c, 'w' | 'x' | 'Y') {
            return true;
        }
    }
    n == 2 && is_vowel(w[0]) && !is_vowel(w[1])
}

fn ends_with(w: &[char], suffix: &str) -> bool {
    let n = suffix.chars().count();
    w.len() >= n && w[w.len() - n..].iter().copied().eq(suffix.chars())
}

/// Longest suffix of `w` found in `list`.
fn longest<'a>(w: &[char], list: &[&'a str]) -> Option<&'a str> {
    list.iter()
        .copied()
        .filter(|s| ends_with(w, s))
        .max_by_key(|s| s.len())
}

fn replace_suffix(w: &mut Vec<char>, suffix: &str, with: &str) {
    let n = suffix.chars().count();
    w.truncate(w.len() - n);
    w.extend(with.chars());
}

fn has_vowel(w: &[char]) -> bool {
    w.iter().copied().any(is_vowel)
}

fn exception1(word: &str) -> Option<&'static str> {
    Some(match word {
        "skis" => "ski",
        "skies" => "sky",
        "dying" => "die",
        "lying" => "lie",
        "tying" => "tie",
        "idly" => "idl",
        "gently" => "gentl",
        "ugly" => "ugli",
        "early" => "earli",
        "only" => "onli",
        "singly" => "singl",
        "sky" => "sky",
        "news" => "news",
        "howe" => "howe",
        "atlas" => "atlas",
        "cosmos" => "cosmos",
        "bias" => "bias",
        "andes" => "andes",
        _ => return None,
    })
}

const EXCEPTION2: &[&str] = &[
    "inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed",
];

/// Position just past the first non-vowel that follows a vowel, searching
/// from `start`.
fn region_after(w: &[char], start: usize) -> usize {
    let mut i = start;
    while i < w.len() && !is_vowel(w[i]) {
        i += 1;
    }
    while i < w.len() && is_vowel(w[i]) {
        i += 1;
    }
    if i < w.len() {
        i + 1
    } else {
        w.len()
    }
}

fn mark_regions(w: &[char]) -> (usize, usize) {
    let p1 = ["gener", "commun", "arsen"]
        .iter()
        .find(|p| w.len() >= p.len() && w[..p.len()].iter().copied().eq(p.chars()))
        .map(|p| p.len())
        .unwrap_or_else(|| region_after(w, 0));
    let p2 = region_after(w, p1);
    (p1, p2)
}

/// Stems a lowercase English word.
///
/// Words of two characters or fewer come back unchanged.
pub fn stem(word: &str) -> String {
    if word.chars().count() <= 2 {
        return word.to_string();
    }
    if let Some(s) = exception1(word) {
        return s.to_string();
    }

    let mut w: Vec<char> = word.chars().collect();
    // Prelude.
    if w.first() == Some(&'\'') {
        w.remove(0);
    }
    if w.first() == Some(&'y') {
        w[0] = 'Y';
    }
    for i in 1..w.len() {
        if w[i] == 'y' && is_vowel(w[i - 1]) {
            w[i] = 'Y';
        }
    }

    let (p1, p2) = mark_regions(&w);

    step0(&mut w);
    step1a(&mut w);
    let current: String = w.iter().collect();
    if EXCEPTION2.contains(&current.as_str()) {
        return current;
    }
    step1b(&mut w, p1);
    step1c(&mut w);
    step2(&mut w, p1);
    step3(&mut w, p1, p2);
    step4(&mut w, p2);
    step5(&mut w, p1, p2);

    w.into_iter().map(|c| if c == 'Y' { 'y' } else { c }).collect()
}

fn step0(w: &mut Vec<char>) {
    if let Some(s) = longest(w, &["'", "'s", "'s'"]) {
        replace_suffix(w, s, "");
    }
}

fn step1a(w: &mut Vec<char>) {
    let Some(s) = longest(w, &["sses", "ied", "ies", "s", "us", "ss"]) else {
        return;
    };
    match s {
        "sses" => replace_suffix(w, s, "ss"),
        "ied" | "ies" => {
            if w.len() > 4 {
                replace_suffix(w, s, "i");
            } else {
                replace_suffix(w, s, "ie");
            }
        }
        "s" => {
            // A vowel somewhere before the letter preceding the s.
            let n = w.len();
            if n >= 3 && has_vowel(&w[..n - 2]) {
                w.pop();
            }
        }
        _ => {}
    }
}

fn step1b(w: &mut Vec<char>, p1: usize) {
    let Some(s) = longest(w, &["eed", "eedly", "ed", "edly", "ing", "ingly"]) else {
        return;
    };
    let stem_len = w.len() - s.len();
    match s {
        "eed" | "eedly" => {
            if stem_len >= p1 {
                replace_suffix(w, s, "ee");
            }
        }
        _ => {
            if !has_vowel(&w[..stem_len]) {
                return;
            }
            w.truncate(stem_len);
            if ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz") {
                w.push('e');
            } else if is_double(w) {
                w.pop();
            } else if w.len() == p1 && ends_short_syllable(w) {
                w.push('e');
            }
        }
    }
}

fn step1c(w: &mut [char]) {
    let n = w.len();
    if n >= 3 && matches!(w[n - 1], 'y' | 'Y') && !is_vowel(w[n - 2]) {
        w[n - 1] = 'i';
    }
}

fn step2(w: &mut Vec<char>, p1: usize) {
    const SUFFIXES: &[&str] = &[
        "tional", "enci", "anci", "abli", "entli", "izer", "ization", "ational", "ation", "ator",
        "alism", "aliti", "alli", "fulness", "ousli", "ousness", "iveness", "iviti", "biliti",
        "bli", "ogi", "fulli", "lessli", "li",
    ];
    let Some(s) = longest(w, SUFFIXES) else {
        return;
    };
    let stem_len = w.len() - s.len();
    if stem_len < p1 {
        return;
    }
    let to = match s {
        "tional" => "tion",
        "enci" => "ence",
        "anci" => "ance",
        "abli" => "able",
        "entli" => "ent",
        "izer" | "ization" => "ize",
        "ational" | "ation" | "ator" => "ate",
        "alism" | "aliti" | "alli" => "al",
        "fulness" | "fulli" => "ful",
        "ousli" | "ousness" => "ous",
        "iveness" | "iviti" => "ive",
        "biliti" | "bli" => "ble",
        "lessli" => "less",
        "ogi" => {
            if stem_len == 0 || w[stem_len - 1] != 'l' {
                return;
            }
            "og"
        }
        "li" => {
            if stem_len == 0 || !is_li_ending(w[stem_len - 1]) {
                return;
            }
            ""
        }
        _ => unreachable!(),
    };
    replace_suffix(w, s, to);
}

fn step3(w: &mut Vec<char>, p1: usize, p2: usize) {
    const SUFFIXES: &[&str] = &[
        "tional", "ational", "alize", "icate", "iciti", "ical", "ful", "ness", "ative",
    ];
    let Some(s) = longest(w, SUFFIXES) else {
        return;
    };
    let stem_len = w.len() - s.len();
    if stem_len < p1 {
        return;
    }
    let to = match s {
        "tional" => "tion",
        "ational" => "ate",
        "alize" => "al",
        "icate" | "iciti" | "ical" => "ic",
        "ful" | "ness" => "",
        "ative" => {
            if stem_len < p2 {
                return;
            }
            ""
        }
        _ => unreachable!(),
    };
    replace_suffix(w, s, to);
}

fn step4(w: &mut Vec<char>, p2: usize) {
    const SUFFIXES: &[&str] = &[
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ism",
        "ate", "iti", "ous", "ive", "ize", "ion",
    ];
    let Some(s) = longest(w, SUFFIXES) else {
        return;
    };
    let stem_len = w.len() - s.len();
    if stem_len < p2 {
        return;
    }
    if s == "ion" && !(stem_len > 0 && matches!(w[stem_len - 1], 's' | 't')) {
        return;
    }
    w.truncate(stem_len);
}

fn step5(w: &mut Vec<char>, p1: usize, p2: usize) {
    let n = w.len();
    match w.last() {
        Some('e') => {
            let pos = n - 1;
            if pos >= p2 || (pos >= p1 && !ends_short_syllable(&w[..pos])) {
                w.pop();
            }
        }
        Some('l') => {
            if n - 1 >= p2 && n >= 2 && w[n - 2] == 'l' {
                w.pop();
            }
        }
        _ => {}
    }
}
