#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ripple/corpus.hpp"
#include "ripple/java_parser.hpp"

namespace ripple {

enum class GraphKind { Call, Class };

/// Directed method invocation graph. Edges are (caller_id, callee_id),
/// deduplicated, self-loop free, sorted ascending.
struct CallGraph {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  std::map<std::string, long> unresolved;  // reason -> count

  // Bookkeeping for the conservation check; not serialized.
  long scanned_sites = 0;
  long resolved_sites = 0;
  long nested_discarded = 0;
};

/// Intra-class clique graph: every pair of methods sharing
/// (file_path, class_name) is connected. Edges stored as (low, high).
struct ClassGraph {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;
};

enum class ReceiverKind {
  None,       // bare call: foo(x)
  This,       // this.foo(x)
  Super,      // super.foo(x)
  Named,      // receiver.foo(x) with an identifier (or dotted) receiver
  NewObject,  // new Foo(x)
  ThisCtor,   // this(x)
  SuperCtor,  // super(x)
  Unknown,    // receiver is a call result, cast, array element, ...
  Literal,    // receiver is a string/char literal (type known, external)
};

struct CallSite {
  int caller_id = -1;
  ReceiverKind kind = ReceiverKind::None;
  std::vector<std::string> receiver_chain;  // for Named/NewObject
  std::string method_name;
  int n_args = 0;
  int line = 0;
  std::size_t name_tok = 0;  // token index of the method name, for local scoping
};

struct ResolveResult {
  std::vector<int> callee_ids;     // all matches (overload fan-out)
  std::string unresolved_reason;   // "external" | "unknown_receiver" | ""
  bool resolved() const { return !callee_ids.empty(); }
};

/// Re-analyzed view of a corpus: one FileAnalysis per distinct file, plus a
/// binding from analysis methods to corpus method ids. build_call_graph
/// re-reads the files under corpus.repo_root, so the snapshot must still be
/// on disk.
class AnalyzedCorpus {
public:
  static AnalyzedCorpus load(const Corpus& corpus, int threads = 0);

  const Corpus& corpus() const { return *corpus_; }
  const std::vector<std::string>& file_paths() const { return file_paths_; }
  const FileAnalysis& analysis(std::size_t file_idx) const { return analyses_[file_idx]; }
  std::size_t n_files() const { return file_paths_.size(); }

  /// Corpus method id for analysis method `method_idx` of file `file_idx`,
  /// or -1 when that method was not part of the corpus.
  int method_id(std::size_t file_idx, std::size_t method_idx) const {
    return id_binding_[file_idx][method_idx];
  }

private:
  const Corpus* corpus_ = nullptr;
  std::vector<std::string> file_paths_;
  std::vector<FileAnalysis> analyses_;
  std::vector<std::vector<int>> id_binding_;
};

/// Name resolution over an analyzed corpus: receiver typing, imports,
/// package scan, inheritance fallback, and (name, n_args) overload fan-out.
class CallResolver {
public:
  explicit CallResolver(const AnalyzedCorpus& analyzed);

  ResolveResult resolve(const CallSite& site) const;

private:
  struct ClassRef {
    std::size_t file_idx;
    std::size_t class_idx;
  };

  const AnalyzedCorpus* analyzed_;
  // simple class name -> declarations, in file order
  std::map<std::string, std::vector<ClassRef>> classes_by_name_;
  // package name -> file indexes
  std::map<std::string, std::vector<std::size_t>> files_by_package_;
  // (file_idx, class_idx) of the caller for each method id
  std::vector<std::pair<std::size_t, int>> method_location_;
  // method id -> index of its MethodInfo within its file analysis
  std::vector<std::size_t> method_local_idx_;

  std::vector<int> methods_in_class(const ClassRef& ref, const std::string& name,
                                    int n_args) const;
  bool lookup_class(const std::string& simple_name, std::size_t from_file,
                    ClassRef* out) const;
  bool lookup_chain(const std::vector<std::string>& chain, std::size_t from_file,
                    ClassRef* out) const;
  bool descend_nested(ClassRef base, const std::vector<std::string>& rest,
                      std::size_t first, ClassRef* out) const;
  std::vector<int> lookup_with_inheritance(ClassRef ref, const std::string& name,
                                           int n_args) const;
  ResolveResult resolve_in_class(ClassRef ref, const std::string& name, int n_args) const;
};

/// Scans one analyzed file for call sites. Nested invocations inside an
/// outer call's argument list are discarded (counted, not resolved);
/// anonymous class bodies and local type declarations are skipped.
struct SiteScan {
  std::vector<CallSite> sites;
  long nested_discarded = 0;
};
SiteScan scan_call_sites(const AnalyzedCorpus& analyzed, std::size_t file_idx);

CallGraph build_call_graph(const Corpus& corpus, int threads = 0);
ClassGraph build_class_graph(const Corpus& corpus);

}  // namespace ripple
