declare module 'mnist' {
  interface DigitGroup {
    length: number;
    set(start: number, end: number): {input: number[]; output: number[]}[];
  }
  const mnist: {[digit: number]: DigitGroup};
  export default mnist;
}
