export class TrainerError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

export class SchemaError extends TrainerError {}
export class EmptyManifest extends TrainerError {}
export class LayerNotFound extends TrainerError {}
export class UnsupportedArchitecture extends TrainerError {}
