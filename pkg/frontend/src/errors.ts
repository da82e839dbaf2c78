/**
 * User-facing message for every error code the API can emit.
 * The exhaustiveness test compares this map against the recorded code enum.
 */

export const ERROR_MESSAGES: Record<string, string> = {
  NonPositiveArgument: "A numeric setting is out of range.",
  EmptyDataset: "The dataset has no rows to work with.",
  SchemaMismatch: "The values do not match the expected columns.",
  NotCsv: "That file is not a readable CSV file.",
  MissingHeader: "The first row must contain column names.",
  MissingLabelColumn: "The file needs a column named 'label'.",
  EmptyFile: "The file has no data rows.",
  RowArityMismatch: "A row has the wrong number of values.",
  MissingValue: "A required cell is empty.",
  PayloadTooLarge: "The file is too large to upload.",
  NotFound: "That item does not exist.",
  Forbidden: "You do not have access to that.",
  Conflict: "That conflicts with something that already exists.",
  Unauthorized: "Please sign in again.",
  UnknownCollaborator: "A selected collaborator is not available.",
  EmptyCollaboratorList: "Select at least one collaborator.",
  ModelNotTrained: "This model has not finished training yet.",
  ReportUnavailable: "Risk analysis has not run for this model yet.",
  UnknownUser: "No such user.",
  InvalidCredentials: "Wrong username or password.",
  EmptyBody: "The message is empty.",
  BodyTooLarge: "The message is too long.",
  MissingField: "A required field is missing.",
  NonFiniteInput: "A numeric value is not finite.",
  DimensionMismatch: "The input size does not match the model.",
  UpstreamComputationError: "A compute step failed; try again.",
  InternalError: "Something went wrong on the server.",
};

export function messageFor(code: string, fallback?: string): string {
  return ERROR_MESSAGES[code] ?? fallback ?? `Unexpected error (${code}).`;
}
