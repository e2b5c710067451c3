/** Error taxonomy. Every failure the CLI reports carries a stable `code`. */

export class ExtractorError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.code = code;
    this.name = code;
  }
}

/** An image file could not be decoded; the file is skipped with a warning. */
export class UnreadableImage extends ExtractorError {
  constructor(message: string) {
    super("UnreadableImage", message);
  }
}

/** The requested layer name does not exist in the loaded model. */
export class MissingLayer extends ExtractorError {
  constructor(message: string) {
    super("MissingLayer", message);
  }
}

/** The model/weights files could not be read or parsed. */
export class WeightLoadFailure extends ExtractorError {
  constructor(message: string) {
    super("WeightLoadFailure", message);
  }
}

/** Model output shape is incompatible with the requested operation. */
export class ShapeMismatch extends ExtractorError {
  constructor(message: string) {
    super("ShapeMismatch", message);
  }
}

/** The image folder contains no decodable images. */
export class EmptyImageDir extends ExtractorError {
  constructor(message: string) {
    super("EmptyImageDir", message);
  }
}
