#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "obkit.h"
#include "obkit/checks.hpp"
#include "obkit/error.hpp"
#include "obkit/io.hpp"

using obkit::Error;
using obkit::ErrorKind;
using obkit::checks::json;

struct obkit_result {
  std::string text;
  obkit_status status;
};

namespace {

obkit_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::Invalid: return OBKIT_PARSE_ERROR;
    case ErrorKind::Budget: return OBKIT_BUDGET_EXCEEDED;
    case ErrorKind::Check: return OBKIT_CHECK_FAILED;
    case ErrorKind::Internal: return OBKIT_INTERNAL_ERROR;
  }
  return OBKIT_INTERNAL_ERROR;
}

std::string error_text(const char* op, const char* kind, const std::string& message) {
  json e = json::object();
  e["op"] = op ? op : "";
  e["error"] = {{"kind", kind}, {"message", message}};
  return e.dump(2);
}

}  // namespace

extern "C" {

obkit_status obkit_run(const char* op, const char* request, obkit_result** out) {
  if (out == nullptr) return OBKIT_PARSE_ERROR;
  *out = nullptr;
  obkit_result* r = new (std::nothrow) obkit_result;
  if (r == nullptr) return OBKIT_INTERNAL_ERROR;
  try {
    if (op == nullptr || request == nullptr)
      throw Error(ErrorKind::Parse, "null operation or request");
    json req = obkit::io::parse_text(request);
    json report = obkit::checks::run_op(op, req);
    r->status = obkit::checks::any_failed(report) ? OBKIT_CHECK_FAILED : OBKIT_OK;
    r->text = report.dump(2);
  } catch (const Error& err) {
    r->status = status_of(err.kind());
    r->text = error_text(op, obkit::error_kind_name(err.kind()), err.what());
  } catch (const std::exception& ex) {
    r->status = OBKIT_INTERNAL_ERROR;
    r->text = error_text(op, "internal", ex.what());
  } catch (...) {
    r->status = OBKIT_INTERNAL_ERROR;
    r->text = error_text(op, "internal", "unknown error");
  }
  *out = r;
  return r->status;
}

const char* obkit_result_json(const obkit_result* r) {
  return r ? r->text.c_str() : "";
}

obkit_status obkit_result_status(const obkit_result* r) {
  return r ? r->status : OBKIT_INTERNAL_ERROR;
}

void obkit_result_free(obkit_result* r) { delete r; }

const char* obkit_version(void) { return "0.1.0"; }

const char* obkit_ops(void) {
  static const std::string listing = [] {
    std::ostringstream o;
    for (const auto& name : obkit::checks::operation_names()) o << name << "\n";
    return o.str();
  }();
  return listing.c_str();
}

}  // extern "C"
