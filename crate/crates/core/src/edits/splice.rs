//! Tree surgery. Leaves keep their original span until the final
//! renumbering, which is how token order is recovered after a move.

use crate::ingest::{AnnotatedSentence, AnnotatedToken, ParseTree};

fn leaf_order(tree: &ParseTree) -> Vec<usize> {
    tree.preorder()
        .into_iter()
        .filter(|(_, n)| n.is_leaf())
        .map(|(_, n)| n.span.start)
        .collect()
}

/// Deletes the node at `path` (and any ancestors left empty).
pub fn remove_subtree(sentence: &AnnotatedSentence, path: &[usize]) -> (Vec<AnnotatedToken>, ParseTree) {
    let removed = sentence.tree().get(path).expect("phrase path exists").span;
    let mut tree = sentence.tree().clone();
    let (last, parent_path) = path.split_last().expect("cannot remove the root");
    tree.get_mut(parent_path).expect("parent exists").children.remove(*last);
    tree.prune_empty();
    tree.renumber(0);
    let tokens = sentence
        .tokens()
        .iter()
        .enumerate()
        .filter(|(i, _)| !(removed.start..removed.end).contains(i))
        .map(|(_, t)| t.clone())
        .collect();
    (tokens, tree)
}

/// The subtree at `path` as a sentence of its own.
pub fn extract_subtree(sentence: &AnnotatedSentence, path: &[usize]) -> (Vec<AnnotatedToken>, ParseTree) {
    let mut tree = sentence.tree().get(path).expect("phrase path exists").clone();
    let span = tree.span;
    tree.renumber(0);
    (sentence.tokens()[span.start..span.end].to_vec(), tree)
}

/// Moves the subtree at `from` so it becomes the sibling immediately before
/// (or after) the node at `to`. Returns the new token order as indices into
/// the source sentence together with the renumbered tree.
///
/// `from` and `to` must not be ancestors of one another.
pub fn move_subtree(tree: &ParseTree, from: &[usize], to: &[usize], after: bool) -> (Vec<usize>, ParseTree) {
    let moved = tree.get(from).expect("moved path exists").clone();
    let mut out = rebuild(tree, &mut Vec::new(), from, to, after, &moved).expect("root is never the moved node");
    out.prune_empty();
    let order = leaf_order(&out);
    out.renumber(0);
    (order, out)
}

fn rebuild(
    node: &ParseTree,
    path: &mut Vec<usize>,
    from: &[usize],
    to: &[usize],
    after: bool,
    moved: &ParseTree,
) -> Option<ParseTree> {
    if path.as_slice() == from {
        return None;
    }
    let mut children = Vec::with_capacity(node.children.len() + 1);
    for (i, child) in node.children.iter().enumerate() {
        path.push(i);
        let is_anchor = path.as_slice() == to;
        if is_anchor && !after {
            children.push(moved.clone());
        }
        if let Some(c) = rebuild(child, path, from, to, after, moved) {
            children.push(c);
        }
        if is_anchor && after {
            children.push(moved.clone());
        }
        path.pop();
    }
    Some(ParseTree {
        label: node.label.clone(),
        span: node.span,
        children,
        word: node.word.clone(),
    })
}
