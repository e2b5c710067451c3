// Minimal declarations for untyped dependencies (the full @types
// packages are not vendored; only the surface used here is declared).

declare module "pngjs" {
  export class PNG {
    constructor(options?: { width?: number; height?: number });
    width: number;
    height: number;
    /** RGBA bytes, row-major. */
    data: Buffer;
    static sync: {
      read(buffer: Buffer): PNG;
      write(png: PNG): Buffer;
    };
  }
}

declare module "yargs" {
  export interface Argv {
    scriptName(name: string): Argv;
    command(
      command: string,
      description: string,
      builder: (y: Argv) => Argv,
      handler: (args: Record<string, any>) => void | Promise<void>
    ): Argv;
    option(
      name: string,
      config: { type: string; demandOption?: boolean; default?: unknown }
    ): Argv;
    demandCommand(min: number): Argv;
    strict(): Argv;
    fail(handler: (msg: string, err: Error | undefined) => void): Argv;
    parseAsync(): Promise<unknown>;
  }
  export default function yargs(argv: string[]): Argv;
}

declare module "yargs/helpers" {
  export function hideBin(argv: string[]): string[];
}
