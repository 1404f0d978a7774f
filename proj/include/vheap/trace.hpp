#pragma once

// Line-oriented trace replay:
//
//   new h | insert h id key | decrease h id key | deletemin h | findmin h
//   meld h1 h2 | check h
//
// '#' starts a comment; tokens are whitespace separated.

#include <iosfwd>

namespace vheap {

/// Replays a trace. deletemin/findmin print "id key" (findmin on an empty
/// heap prints "none"); check prints an audit report as JSON. Errors go to
/// `err` prefixed with the line number and stop the replay.
/// Returns 0 when the trace ran clean, 1 on a trace error or audit finding.
int run_trace(std::istream& in, std::ostream& out, std::ostream& err);

} // namespace vheap
