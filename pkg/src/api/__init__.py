"""Job schemas, codec, dispatch and the verification suite."""
