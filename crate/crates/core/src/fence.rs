//! The fence convention: plans travel inside triple-backtick blocks.
//!
//! The same convention is used everywhere a plan meets surrounding
//! text: rendered few-shot exemplars, raw annotation completions, and
//! the single continuation that carries a plan followed by a response.

/// The first fenced block found in a text, split into the text before
/// the opening fence, the block interior, and the text after the
/// closing fence line. `closed` is false when the fence never closes,
/// in which case the interior runs to end of input and `after` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FencedBlock<'a> {
    pub before: &'a str,
    pub inner: &'a str,
    pub after: &'a str,
    pub closed: bool,
}

/// Find the first triple-backtick block. The opening fence may carry a
/// language tag (```` ```python ````); the closing fence is a line that
/// is exactly ``` after trimming.
pub fn first_fenced_block(text: &str) -> Option<FencedBlock<'_>> {
    let mut offset = 0;
    let mut open_end = None;
    let mut before_end = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if open_end.is_none() {
            if trimmed.starts_with("```") {
                before_end = offset;
                open_end = Some(offset + line.len());
            }
        } else if trimmed == "```" {
            let inner_end = offset;
            let after_start = offset + line.len();
            return Some(FencedBlock {
                before: &text[..before_end],
                inner: trim_inner(&text[open_end.unwrap()..inner_end]),
                after: &text[after_start..],
                closed: true,
            });
        }
        offset += line.len();
    }
    open_end.map(|end| FencedBlock {
        before: &text[..before_end],
        inner: trim_inner(&text[end..]),
        after: "",
        closed: false,
    })
}

/// Interior lines are kept verbatim except for the newline that ends
/// the block.
fn trim_inner(inner: &str) -> &str {
    inner.strip_suffix('\n').unwrap_or(inner)
}

/// Render a plan as a fenced block. A single trailing newline on the
/// plan is absorbed so rendering is stable.
pub fn render_plan_block(plan: &str) -> String {
    format!("```\n{}\n```", plan.strip_suffix('\n').unwrap_or(plan))
}

/// Split a plan-mode continuation at the close of its first fenced
/// block: the interior is the plan, everything after the closing fence
/// (leading whitespace dropped) is the response. `None` means the
/// continuation has no closed fence and cannot be split.
pub fn split_continuation(text: &str) -> Option<(String, String)> {
    let block = first_fenced_block(text)?;
    if !block.closed {
        return None;
    }
    Some((block.inner.to_string(), block.after.trim_start().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_first_of_two_blocks() {
        let text = "intro\n```\nA\n```\n```\nB\n```\n";
        let block = first_fenced_block(text).unwrap();
        assert_eq!(block.before, "intro\n");
        assert_eq!(block.inner, "A");
        assert!(block.closed);
    }

    #[test]
    fn language_tag_on_opening_fence_is_allowed() {
        let text = "```python\ndef f():\n    return 1\n```\ntail";
        let block = first_fenced_block(text).unwrap();
        assert_eq!(block.inner, "def f():\n    return 1");
        assert_eq!(block.after, "tail");
    }

    #[test]
    fn unclosed_fence_runs_to_end() {
        let block = first_fenced_block("```\ndef f():").unwrap();
        assert!(!block.closed);
        assert_eq!(block.inner, "def f():");
        assert_eq!(block.after, "");
    }

    #[test]
    fn no_fence_yields_none() {
        assert!(first_fenced_block("just text").is_none());
    }

    #[test]
    fn split_is_inverse_of_render() {
        let plan = "def f():\n    return 1";
        let response = "The answer is 1.";
        let continuation = format!("{}\n{}", render_plan_block(plan), response);
        let (p, r) = split_continuation(&continuation).unwrap();
        assert_eq!(p, plan);
        assert_eq!(r, response);
    }

    #[test]
    fn render_absorbs_one_trailing_newline() {
        assert_eq!(render_plan_block("x = 1\n"), render_plan_block("x = 1"));
    }

    #[test]
    fn unsplittable_continuation_is_none() {
        assert!(split_continuation("no fences here").is_none());
        assert!(split_continuation("```\nnever closed").is_none());
    }
}
