#ifndef OBKIT_H
#define OBKIT_H

/* C interface to the verification library.  Every call runs one named
 * operation on a JSON request and yields a result handle carrying the
 * report (or a structured error) plus a process exit status. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum obkit_status {
  OBKIT_OK = 0,              /* every check passed */
  OBKIT_CHECK_FAILED = 1,    /* the report contains a failed check */
  OBKIT_PARSE_ERROR = 2,     /* malformed or invalid input */
  OBKIT_BUDGET_EXCEEDED = 3, /* a bounded search ran out of budget */
  OBKIT_INTERNAL_ERROR = 4   /* invariant breach inside the library */
} obkit_status;

typedef struct obkit_result obkit_result;

/* Runs the operation named `op` (e.g. "metric.d1", "suite.tree") on the
 * JSON text `request`.  Always produces a result handle, also on failure;
 * returns the status the handle carries.  The handle must be released
 * with obkit_result_free. */
obkit_status obkit_run(const char* op, const char* request, obkit_result** out);

/* JSON text of the report or error object.  Owned by the handle; valid
 * until obkit_result_free. */
const char* obkit_result_json(const obkit_result* r);

obkit_status obkit_result_status(const obkit_result* r);

void obkit_result_free(obkit_result* r);

/* Library version string, e.g. "0.1.0". */
const char* obkit_version(void);

/* Newline-separated list of the operation names, owned by the library. */
const char* obkit_ops(void);

#ifdef __cplusplus
}
#endif

#endif /* OBKIT_H */
